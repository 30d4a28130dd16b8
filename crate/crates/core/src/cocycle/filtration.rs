//! Weight and Hodge bookkeeping for the three members of the triple.
//!
//! A term `s ⊗ φ` of `R^m` at Čech level `c`, with `φ` of form degree
//! `p = m - c`, has sheaf-level weight `w = w(s) + w(f) + w(φ)`, where
//! `e^k(n)` and `ω^k(n)` have weight `-2|k| - 2n`, a coefficient function
//! growing like `(log|t|)^j` has weight `j`, and each logarithmic
//! differential has weight 1. After the Čech shift (`W̃_j` at level `c` is
//! sheaf weight `j + c`) and décalage (`W_n R^m = W̃_{n-m}`), the term lies in
//! `W_n R^m` exactly when `w + p <= n`. The Hodge degree is that of the Log
//! coefficient (`F^{-|k|-n}` for `ω^k(n)`) plus the holomorphic degree.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Xi,
    Eta,
    Alpha,
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "xi" => Ok(Label::Xi),
            "eta" => Ok(Label::Eta),
            "alpha" => Ok(Label::Alpha),
            other => Err(format!("unknown form {other:?}; expected xi, eta or alpha")),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Xi => "xi",
            Label::Eta => "eta",
            Label::Alpha => "alpha",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationTerm {
    pub description: String,
    pub log_weight: i32,
    pub function_weight: i32,
    pub form_weight: i32,
    pub form_degree: usize,
    pub cech_level: usize,
    /// `n` such that the term lies in `W_n` of its total degree.
    pub weight: i32,
    /// `p` such that the term lies in `F^p`, when that is tracked.
    pub hodge: Option<i32>,
}

impl FiltrationTerm {
    fn new(
        description: String,
        log_weight: i32,
        function_weight: i32,
        form_weight: i32,
        form_degree: usize,
        cech_level: usize,
        hodge: Option<i32>,
    ) -> Self {
        Self {
            description,
            log_weight,
            function_weight,
            form_weight,
            form_degree,
            cech_level,
            weight: log_weight + function_weight + form_weight + form_degree as i32,
            hodge,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationCheck {
    pub label: Label,
    pub g: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub terms: Vec<FiltrationTerm>,
    pub in_w0: bool,
    /// `None` where no Hodge membership is claimed.
    pub in_f0: Option<bool>,
}

pub fn filtration_check(label: Label, g: usize, n: u32) -> FiltrationCheck {
    let gi = g as i32;
    let top = g.saturating_sub(1);
    let terms = match label {
        // ω^0(g) ⊗ ∧ dt_μ/(t_μ-1): F^{-g} coefficient times a (g,0)-form,
        // at the top Čech level
        Label::Xi => vec![FiltrationTerm::new(
            "ω^0(g) ∧_μ dt_μ/(t_μ-1)".into(),
            -2 * gi,
            0,
            gi,
            g,
            top,
            Some(0),
        )],
        Label::Eta => vec![
            FiltrationTerm::new("ω^0(g) ∧_μ dt_μ/(t_μ-1) / 2".into(), -2 * gi, 0, gi, g, top, None),
            FiltrationTerm::new("conjugate / 2".into(), -2 * gi, 0, gi, g, top, None),
        ],
        Label::Alpha => {
            let mut v = Vec::new();
            for mu in 0..g {
                for m in 0..=n as i32 {
                    // D_{m+1} grows at most like (log|t|)^{m+1} at 0 and ∞
                    v.push(FiltrationTerm::new(
                        format!(
                            "D_{}(t_{}) e^{m}_{}(1) with {} other factors",
                            m + 1,
                            mu + 1,
                            mu + 1,
                            g - 1
                        ),
                        -2 * m - 2 * gi,
                        m + 1,
                        gi - 1,
                        g - 1,
                        top,
                        None,
                    ));
                }
            }
            v
        }
    };
    let in_w0 = terms.iter().all(|t| t.weight <= 0);
    let in_f0 = match label {
        Label::Xi => Some(terms.iter().all(|t| t.hodge.is_some_and(|p| p >= 0))),
        _ => None,
    };
    FiltrationCheck {
        label,
        g,
        n,
        terms,
        in_w0,
        in_f0,
    }
}
