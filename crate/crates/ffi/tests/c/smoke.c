#include <math.h>
#include <stdio.h>
#include "osctime.h"

int main(void) {
    OsctimeVector *psi = NULL, *phi = NULL;
    if (osctime_vector_xi("1/4", "1", 2, &psi) != OSCTIME_STATUS_OK) return 10;
    if (osctime_vector_xi("1/2", "1", 0, &phi) != OSCTIME_STATUS_OK) return 11;
    double re = 0, im = 0, res = 1;
    if (osctime_form_eval(OSCTIME_FORM_T_EPS, psi, phi, "1", &re, &im) != OSCTIME_STATUS_OK) return 12;
    if (osctime_ccr_residual(OSCTIME_FORM_T_EPS, psi, phi, "1", 1e-10, &res) != OSCTIME_STATUS_OK) return 13;
    OsctimeVector *edge = NULL;
    double r2, i2;
    if (osctime_vector_xi("1", "1", 0, &edge) != OSCTIME_STATUS_OK) return 14;
    if (osctime_form_eval(OSCTIME_FORM_T_EPS, edge, edge, "1", &r2, &i2) != OSCTIME_STATUS_DOMAIN) return 15;
    if (osctime_last_error() == NULL) return 16;
    printf("%.12e %.12e %g\n", re, im, res);
    osctime_vector_free(psi);
    osctime_vector_free(phi);
    osctime_vector_free(edge);
    return 0;
}
