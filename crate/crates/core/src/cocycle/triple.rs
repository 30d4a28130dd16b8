//! The forms `ξ`, `η = Re ξ` and `α`, built as wedge products of
//! one-coordinate factors. Each factor carries its Log coefficients in its
//! own coordinate, so the wedge multiplies Log parts as an external tensor
//! product.

use num_complex::Complex64;

use super::{CocycleError, FormValue, PointSample};
use crate::derham::FormIndex;
use crate::logsheaf::MultiIndex;
use crate::specfun::{d_bwr, EvalConfig};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A coefficient together with its Wirtinger derivatives `∂/∂t`, `∂/∂t̄`.
#[derive(Debug, Clone, Copy)]
struct Jet {
    n: u32,
    hol: FormIndex,
    antihol: FormIndex,
    value: Complex64,
    d_t: Complex64,
    d_tbar: Complex64,
}

/// Log(1)-valued form in the single coordinate `coord`.
#[derive(Debug, Clone)]
struct Factor {
    coord: usize,
    degree: usize,
    jets: Vec<Jet>,
}

impl Factor {
    fn value(&self, g: usize, n: u32) -> FormValue {
        let mut f = FormValue::zero(g, n, 1);
        for j in &self.jets {
            f.add(MultiIndex::along(g, self.coord, j.n), j.hol, j.antihol, j.value);
        }
        f
    }

    /// `∇` from the jets and the e-basis connection
    /// `e^k ↦ e^{k+1_μ} ⊗ Im(dt_μ/t_μ)`.
    fn nabla(&self, g: usize, n: u32, z: Complex64) -> FormValue {
        let mu = self.coord;
        let mut out = FormValue::zero(g, n, 1);
        for j in &self.jets {
            let k = MultiIndex::along(g, mu, j.n);
            push_one_form(&mut out, &k, j.hol, j.antihol, mu, j.d_t, j.d_tbar);
            let im_dlog = (1.0 / (2.0 * I * z), -1.0 / (2.0 * I * z.conj()));
            push_one_form(
                &mut out,
                &k.bump(mu),
                j.hol,
                j.antihol,
                mu,
                j.value * im_dlog.0,
                j.value * im_dlog.1,
            );
        }
        out
    }

    fn conj(&self) -> Factor {
        // the twist (1) makes conjugation anti-linear with a sign
        Factor {
            coord: self.coord,
            degree: self.degree,
            jets: self
                .jets
                .iter()
                .map(|j| Jet {
                    n: j.n,
                    hol: j.antihol,
                    antihol: j.hol,
                    value: -j.value.conj(),
                    d_t: -j.d_tbar.conj(),
                    d_tbar: -j.d_t.conj(),
                })
                .collect(),
        }
    }
}

/// Adds `(a dt_μ + b dt̄_μ) ∧ e^k ⊗ dt_H ∧ dt̄_A`.
fn push_one_form(
    out: &mut FormValue,
    k: &MultiIndex,
    hol: FormIndex,
    antihol: FormIndex,
    mu: usize,
    a: Complex64,
    b: Complex64,
) {
    if let Some((h, s)) = hol.wedge_front(mu) {
        out.add(k.clone(), h, antihol, a * s as f64);
    }
    if let Some((an, s)) = antihol.wedge_front(mu) {
        // dt̄_μ moves across the |H| holomorphic differentials
        let s2 = if hol.len().is_multiple_of(2) { 1 } else { -1 };
        out.add(k.clone(), hol, an, b * (s * s2) as f64);
    }
}

/// `ξ_μ = ω^0(1) ⊗ dt_μ/(t_μ - 1)` in the e-basis:
/// `ω^0 = Σ_n (-i log|t_μ|)^n/n! e^{n_μ}`.
fn xi_factor(mu: usize, z: Complex64, n: u32) -> Factor {
    let l = z.norm().ln();
    let inv = 1.0 / (z - 1.0);
    let mut jets = Vec::with_capacity(n as usize + 1);
    // p = (-i)^m L^m/m! and its derivative in L, prev = (-i) (-i)^{m-1} L^{m-1}/(m-1)!
    let mut p = Complex64::new(1.0, 0.0);
    let mut prev = Complex64::default();
    for m in 0..=n {
        jets.push(Jet {
            n: m,
            hol: FormIndex::from_members(&[mu]),
            antihol: FormIndex::empty(),
            value: p * inv,
            d_t: prev * inv / (2.0 * z) - p * inv * inv,
            d_tbar: prev * inv / (2.0 * z.conj()),
        });
        prev = -I * p;
        p *= -I * l / (m + 1) as f64;
    }
    Factor {
        coord: mu,
        degree: 1,
        jets,
    }
}

/// `α_μ = Σ_{m <= N} D_{m+1}(t_μ) e^{m_μ}(1)`; derivatives are not needed.
fn alpha_factor(mu: usize, z: Complex64, n: u32, cfg: &EvalConfig) -> Result<Factor, CocycleError> {
    let jets = (0..=n)
        .map(|m| {
            Ok(Jet {
                n: m,
                hol: FormIndex::empty(),
                antihol: FormIndex::empty(),
                value: Complex64::new(d_bwr(m + 1, z, cfg)?, 0.0),
                d_t: Complex64::default(),
                d_tbar: Complex64::default(),
            })
        })
        .collect::<Result<Vec<_>, CocycleError>>()?;
    Ok(Factor {
        coord: mu,
        degree: 0,
        jets,
    })
}

fn unit(g: usize, n: u32) -> FormValue {
    let mut f = FormValue::zero(g, n, 0);
    f.add(
        MultiIndex::zero(g),
        FormIndex::empty(),
        FormIndex::empty(),
        Complex64::new(1.0, 0.0),
    );
    f
}

fn product(factors: &[FormValue], g: usize, n: u32) -> FormValue {
    factors.iter().fold(unit(g, n), |acc, f| acc.wedge(f))
}

/// `∇(F_1 ∧ ⋯ ∧ F_g) = Σ_ν ± F_1 ∧ ⋯ ∧ ∇F_ν ∧ ⋯ ∧ F_g`.
fn nabla_product(factors: &[Factor], g: usize, n: u32, t: &[Complex64]) -> FormValue {
    let values: Vec<FormValue> = factors.iter().map(|f| f.value(g, n)).collect();
    let mut out = FormValue::zero(g, n, factors.len() as i32);
    let mut before = 0;
    for (nu, f) in factors.iter().enumerate() {
        let mut parts = values.clone();
        parts[nu] = f.nabla(g, n, t[f.coord]);
        let term = product(&parts, g, n);
        out = if before % 2 == 0 {
            out.plus(&term)
        } else {
            out.minus(&term)
        };
        before += f.degree;
    }
    out
}

fn xi_factors(g: usize, n: u32, p: &PointSample) -> Vec<Factor> {
    (0..g).map(|mu| xi_factor(mu, p.coords()[mu], n)).collect()
}

/// `ξ = ω^0(g) ⊗ ∧_μ dt_μ/(t_μ - 1)`, coefficients in the e-basis.
pub fn xi_at(g: usize, n: u32, p: &PointSample) -> Result<FormValue, CocycleError> {
    p.expect_g(g)?;
    let values: Vec<FormValue> = xi_factors(g, n, p).iter().map(|f| f.value(g, n)).collect();
    Ok(product(&values, g, n))
}

/// `ξ̄ = ξ̄_1 ∧ ⋯ ∧ ξ̄_g`.
pub fn xi_bar_at(g: usize, n: u32, p: &PointSample) -> Result<FormValue, CocycleError> {
    p.expect_g(g)?;
    let values: Vec<FormValue> = xi_factors(g, n, p).iter().map(|f| f.conj().value(g, n)).collect();
    Ok(product(&values, g, n))
}

/// `η = (ξ + ξ̄)/2`.
pub fn eta_at(g: usize, n: u32, p: &PointSample) -> Result<FormValue, CocycleError> {
    Ok(xi_at(g, n, p)?
        .plus(&xi_bar_at(g, n, p)?)
        .scale(Complex64::new(0.5, 0.0)))
}

/// `α = Σ_μ (-1)^{μ-1} α_μ ξ_1 ∧ ⋯ ∧ ξ_{μ-1} ∧ ξ̄_{μ+1} ∧ ⋯ ∧ ξ̄_g`
/// (μ counted from one); for `g = 1` just `α_1`.
pub fn alpha_at(g: usize, n: u32, p: &PointSample, cfg: &EvalConfig) -> Result<FormValue, CocycleError> {
    p.expect_g(g)?;
    alpha_from_coords(g, n, p.coords(), cfg)
}

/// [`alpha_at`] without the margin check, for finite-difference stencils.
pub(crate) fn alpha_from_coords(
    g: usize,
    n: u32,
    t: &[Complex64],
    cfg: &EvalConfig,
) -> Result<FormValue, CocycleError> {
    let xis: Vec<Factor> = t.iter().enumerate().map(|(mu, z)| xi_factor(mu, *z, n)).collect();
    let mut out = FormValue::zero(g, n, g as i32);
    for (mu, z) in t.iter().enumerate() {
        let mut parts = Vec::with_capacity(g);
        for (nu, xi) in xis.iter().enumerate() {
            parts.push(match nu.cmp(&mu) {
                std::cmp::Ordering::Less => xi.value(g, n),
                std::cmp::Ordering::Equal => alpha_factor(mu, *z, n, cfg)?.value(g, n),
                std::cmp::Ordering::Greater => xi.conj().value(g, n),
            });
        }
        let term = product(&parts, g, n);
        out = if mu % 2 == 0 { out.plus(&term) } else { out.minus(&term) };
    }
    Ok(out)
}

/// `∇ξ` from exact derivatives of the coefficients.
pub fn nabla_xi(g: usize, n: u32, p: &PointSample) -> Result<FormValue, CocycleError> {
    p.expect_g(g)?;
    Ok(nabla_product(&xi_factors(g, n, p), g, n, p.coords()))
}

/// `∇η = (∇ξ + ∇ξ̄)/2` from exact derivatives of the coefficients.
pub fn nabla_eta(g: usize, n: u32, p: &PointSample) -> Result<FormValue, CocycleError> {
    p.expect_g(g)?;
    let bars: Vec<Factor> = xi_factors(g, n, p).iter().map(Factor::conj).collect();
    let nabla_bar = nabla_product(&bars, g, n, p.coords());
    Ok(nabla_xi(g, n, p)?.plus(&nabla_bar).scale(Complex64::new(0.5, 0.0)))
}
