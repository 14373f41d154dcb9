//! Ultra-weak sesquilinear forms built from the angle operators, their
//! matrix elements, and the form-level commutation check.

mod angle;
mod ccr;
mod matrix;
mod sweep;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gauss::{MomentCoeff, MomentSum};
use crate::table::{fmt_c64, fmt_f64, Table};

pub use angle::{
    t_ab_exact, t_ab_f64, t_ab_form, t_eps_exact, t_eps_exact_opts, t_eps_f64, t_eps_form, t_hat_sesq_exact,
};
pub use ccr::{ccr_eps_pair, ccr_residual, ccr_residual_f64, ccr_residual_scaled, ccr_table, CcrReport, FormKind};
pub use matrix::{
    k_matrix_element, k_matrix_exact, l_matrix_element, l_matrix_exact, t_hat_exact, t_hat_form, HatKernel,
};
pub use sweep::{
    analyticity_check, continuum_sweep, divergence_probe, gauss_legendre, harmonic_odd, harmonic_odd_sum,
    unboundedness_witness, witness_table, witness_vector, ContinuumReport, ContinuumRow, DivergenceReport, WitnessRow,
    EULER_GAMMA,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormId {
    TEps,
    TAb,
    THat,
    TG,
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FormId::TEps => "t_eps",
            FormId::TAb => "t_ab",
            FormId::THat => "t_hat",
            FormId::TG => "t_g",
        };
        write!(f, "{s}")
    }
}

/// Whether the exact value is a rational-complex multiple of `√π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    SqrtPiMultiple,
    Plain,
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Units::SqrtPiMultiple => write!(f, "sqrt_pi"),
            Units::Plain => write!(f, "plain"),
        }
    }
}

/// A form value with the metadata needed to reproduce it.
///
/// `value` is always the plain complex number; `exact` holds the exact
/// expression when the exact pipeline produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormValue {
    pub form: FormId,
    pub value: Complex64,
    pub units: Units,
    pub exact: Option<String>,
    pub params: Vec<(String, String)>,
    pub truncation: Option<u32>,
}

impl FormValue {
    pub fn from_exact<C: MomentCoeff + fmt::Display>(form: FormId, sum: &MomentSum<C>) -> Self {
        let units = if sum.sqrt_pi_multiple().is_some() { Units::SqrtPiMultiple } else { Units::Plain };
        FormValue { form, value: sum.eval(), units, exact: Some(sum.to_string()), params: Vec::new(), truncation: None }
    }

    pub fn from_float(form: FormId, value: Complex64) -> Self {
        FormValue { form, value, units: Units::Plain, exact: None, params: Vec::new(), truncation: None }
    }

    pub fn with_param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn with_truncation(mut self, n: u32) -> Self {
        self.truncation = Some(n);
        self
    }

    pub fn params_string(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }

    pub const COLUMNS: [&'static str; 8] = ["form", "params", "re", "im", "units", "exact", "truncation", "residual"];

    pub fn to_row(&self, residual: Option<f64>) -> Vec<String> {
        let (re, im) = fmt_c64(self.value);
        vec![
            self.form.to_string(),
            self.params_string(),
            re,
            im,
            self.units.to_string(),
            self.exact.clone().unwrap_or_default(),
            self.truncation.map(|n| n.to_string()).unwrap_or_default(),
            residual.map(fmt_f64).unwrap_or_default(),
        ]
    }
}

/// A table of form values in the shared schema.
pub fn form_table(name: &str, values: &[FormValue]) -> Table {
    let mut t = Table::new(name, &FormValue::COLUMNS);
    for v in values {
        t.push(v.to_row(None));
    }
    t
}
