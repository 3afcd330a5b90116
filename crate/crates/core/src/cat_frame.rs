//! Interaction-frame Hamiltonian `H_F = U_0^dag (sum_j sigma_3^{(j)}) U_0` and the two-atom cat basis.
//!
//! Dressed-basis matrices are indexed label-major, `label_index * levels + n`, with labels in
//! [`SpinLabel::all`] order. For two atoms that order is `(1,1), (1,-1), (-1,1), (-1,-1)`.

use crate::bessel::{bessel_j, even_part, odd_part, BesselSeries};
use crate::bosonic::{displaced_diag_element, displacement, FockTruncation};
use crate::error::{Error, Result};
use crate::linalg::{c, cis, CMatrix, CVector, C64, I};
use crate::model::{DressedBasis, ModelParams};
use crate::spin::SpinLabel;
use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Rows are the cat states in product-label coordinates.
pub fn cat_transform() -> Matrix4<f64> {
    Matrix4::new(
        S, 0.0, 0.0, S, //
        S, 0.0, 0.0, -S, //
        0.0, S, S, 0.0, //
        0.0, -S, S, 0.0,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CatIndex {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
}

impl CatIndex {
    pub const ALL: [CatIndex; 4] = [CatIndex::Phi1, CatIndex::Phi2, CatIndex::Phi3, CatIndex::Phi4];

    /// Position in `(Phi1, Phi2, Phi3, Phi4)` order.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Position in the block order `(c1, c3, c2, c4)`.
    pub fn block_index(self) -> usize {
        [0, 2, 1, 3][self.index()]
    }

    pub fn from_number(k: usize) -> Result<Self> {
        match k {
            1..=4 => Ok(Self::ALL[k - 1]),
            _ => Err(crate::error::invalid("cat", format!("cat index {k} outside 1..=4"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatState {
    pub index: CatIndex,
    pub n: usize,
    pub vector: CVector,
}

fn require_pair(params: &ModelParams, operation: &'static str) -> Result<()> {
    params.require_atoms(operation, 2)
}

/// The four cat states at Fock level `n`.
pub fn cat_basis(n: usize, params: &ModelParams, trunc: FockTruncation) -> Result<[CatState; 4]> {
    require_pair(params, "cat_basis")?;
    params.require_heisenberg("cat_basis")?;
    trunc.check_level(n)?;
    let products: Vec<CVector> = SpinLabel::all(2)
        .iter()
        .map(|l| crate::model::dressed_state(l, n, params, trunc).map(|d| d.vector))
        .collect::<Result<_>>()?;
    let t = cat_transform();
    Ok(CatIndex::ALL.map(|index| {
        let k = index.index();
        let mut v = CVector::zeros(products[0].len());
        for (i, p) in products.iter().enumerate() {
            if t[(k, i)] != 0.0 {
                v += p * c(t[(k, i)]);
            }
        }
        CatState { index, n, vector: v }
    }))
}

/// Product-label amplitudes to cat amplitudes `(Phi1..Phi4)`.
pub fn product_to_cat(v: &Vector4<C64>) -> Vector4<C64> {
    cat_transform().map(c) * v
}

pub fn cat_to_product(v: &Vector4<C64>) -> Vector4<C64> {
    cat_transform().transpose().map(c) * v
}

/// `Theta_j(t) = g2 sin(omega_j t + phi_j) / omega_j`
fn theta(params: &ModelParams, site: usize, t: f64) -> f64 {
    let w = params.drive_freqs[site];
    params.g2 * (w * t + params.drive_phases[site]).sin() / w
}

fn check_levels(trunc: FockTruncation, n_max: usize) -> Result<usize> {
    trunc.check_level(n_max)?;
    Ok(n_max + 1)
}

/// Closed form of `H_F(t)` on dressed states with `n <= n_max`: the `(lambda, n), (lambda_(j), n')`
/// element is `e^{i[omega(n-n')t + omega x^2 (1 - lambda_j Lambda) t + 2 lambda_j Theta_j(t)]}
/// <n| e^{lambda_j x (a^dag - a)} |n'>`.
pub fn hf_matrix(params: &ModelParams, trunc: FockTruncation, n_max: usize, t: f64) -> Result<CMatrix> {
    params.require_heisenberg("hf_matrix")?;
    let levels = check_levels(trunc, n_max)?;
    let m = params.m();
    let x = params.x();
    let gamma = params.gamma();
    let plus = displacement(trunc, x)?;
    let minus = displacement(trunc, -x)?;
    let labels = SpinLabel::all(m);
    let mut h = CMatrix::zeros(labels.len() * levels, labels.len() * levels);
    for (li, label) in labels.iter().enumerate() {
        let big_lambda = label.total() as f64;
        for j in 0..m {
            let lj = label.lambda(j) as f64;
            let target = label.flipped(j).index();
            let disp = if lj > 0.0 { &plus } else { &minus };
            let base = gamma * (1.0 - lj * big_lambda) * t + 2.0 * lj * theta(params, j, t);
            for n in 0..levels {
                for np in 0..levels {
                    let phase = base + params.omega * (n as f64 - np as f64) * t;
                    h[(li * levels + n, target * levels + np)] = cis(phase) * disp[(n, np)];
                }
            }
        }
    }
    Ok(h)
}

/// `H_F(t)` by direct conjugation of `sum_j sigma_3^{(j)} (x) 1` with `U_0(t)`.
pub fn hf_by_conjugation(params: &ModelParams, trunc: FockTruncation, n_max: usize, t: f64) -> Result<CMatrix> {
    let basis = DressedBasis::new(params, trunc)?;
    hf_by_conjugation_in(&basis, n_max, t)
}

pub fn hf_by_conjugation_in(basis: &DressedBasis, n_max: usize, t: f64) -> Result<CMatrix> {
    let levels = check_levels(basis.truncation(), n_max)?;
    let m = basis.params().m();
    let dim = basis.truncation().dim();
    let full = basis.phased_columns(t);
    let cols: Vec<usize> = (0..basis.labels().len())
        .flat_map(|li| (0..levels).map(move |n| (li, n)))
        .map(|(li, n)| basis.index(li, n))
        .collect();
    let sub = full.select_columns(&cols);
    // sum_j sigma_3^{(j)} is diagonal in the computational spin basis
    let mut scaled = sub.clone();
    for s in 0..1usize << m {
        let z: f64 = (0..m).map(|j| if (s >> (m - 1 - j)) & 1 == 0 { 1.0 } else { -1.0 }).sum();
        for k in 0..dim {
            for col in 0..cols.len() {
                scaled[(s * dim + k, col)] *= z;
            }
        }
    }
    Ok(sub.adjoint() * scaled)
}

/// Split into the Fock-diagonal part `H_F'` (`n = n'`) and the remainder `H_F''`.
pub fn split_hf(hf: &CMatrix, levels: usize) -> Result<(CMatrix, CMatrix)> {
    if levels == 0 || hf.nrows() % levels != 0 || !hf.is_square() {
        return Err(Error::Dimension { expected: levels, got: hf.nrows() });
    }
    let mut prime = CMatrix::zeros(hf.nrows(), hf.ncols());
    for i in 0..hf.nrows() {
        for j in 0..hf.ncols() {
            if i % levels == j % levels {
                prime[(i, j)] = hf[(i, j)];
            }
        }
    }
    let rest = hf - &prime;
    Ok((prime, rest))
}

/// Fock-independent bracket of `H_F'` for two atoms, in product-label order:
/// `sum_lambda sum_j e^{i[omega x^2 (1 - lambda_j Lambda) t + 2 lambda_j Theta_j(t)]} |lambda><lambda_(j)|`.
pub fn expansion_m2(params: &ModelParams, t: f64) -> Result<Matrix4<C64>> {
    require_pair(params, "expansion_m2")?;
    let gamma = params.gamma();
    let mut out = Matrix4::zeros();
    for (li, label) in SpinLabel::all(2).iter().enumerate() {
        let big_lambda = label.total() as f64;
        for j in 0..2 {
            let lj = label.lambda(j) as f64;
            let phase = gamma * (1.0 - lj * big_lambda) * t + 2.0 * lj * theta(params, j, t);
            out[(li, label.flipped(j).index())] += cis(phase);
        }
    }
    Ok(out)
}

/// [`expansion_m2`] in cat order `(Phi1..Phi4)`.
pub fn expansion_m2_cat(params: &ModelParams, t: f64) -> Result<Matrix4<C64>> {
    let tr = cat_transform().map(c);
    Ok(tr * expansion_m2(params, t)? * tr.transpose())
}

/// `E_{Delta,n,+-} = (delta/2) <n|D(x)|n> (J_0(Gamma_1) +- J_0(Gamma_2))`
pub fn e_delta(n: usize, params: &ModelParams, sign: Sign) -> Result<f64> {
    require_pair(params, "e_delta")?;
    let j1 = bessel_j(0, params.bessel_argument(0));
    let j2 = bessel_j(0, params.bessel_argument(1));
    let d = displaced_diag_element(n, params.x());
    Ok(0.5 * params.delta * d * (j1 + sign.value() * j2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Values of `A_0, B_0, C_0, D_0` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a0: C64,
    pub b0: C64,
    pub c0: C64,
    pub d0: C64,
}

/// Fourier representation of the frame coefficients at Fock level `n`:
/// `A_0 = p sum_{a != 0} [e_a(G1) e^{i a w1 t} + e_a(G2) e^{i a w2 t}]`,
/// `D_0` the same with the second drive subtracted, `B_0`, `C_0` with odd parts `o_a` and the
/// second drive entering with `-` and `+`. Here `p = (delta/2) <n|D(x)|n>`,
/// `e_a(G) = (J_a(G) + J_a(-G))/2` and `o_a(G) = (J_a(G) - J_a(-G))/2`.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientFunctions {
    pub n: usize,
    pub prefactor: f64,
    pub gamma: f64,
    freqs: [f64; 2],
    phases: [f64; 2],
    g2: f64,
    series: [BesselSeries; 2],
}

impl CoefficientFunctions {
    /// `cutoff = None` picks `max(40, 3 max(Gamma_1, Gamma_2))`.
    pub fn new(n: usize, params: &ModelParams, cutoff: Option<usize>) -> Result<Self> {
        require_pair(params, "coefficient_functions")?;
        let g = [params.bessel_argument(0), params.bessel_argument(1)];
        let cutoff = cutoff.unwrap_or_else(|| crate::bessel::default_cutoff(g[0].max(g[1])));
        Ok(Self {
            n,
            prefactor: 0.5 * params.delta * displaced_diag_element(n, params.x()),
            gamma: params.gamma(),
            freqs: [params.drive_freqs[0], params.drive_freqs[1]],
            phases: [params.drive_phases[0], params.drive_phases[1]],
            g2: params.g2,
            series: [BesselSeries::new(g[0], cutoff), BesselSeries::new(g[1], cutoff)],
        })
    }

    pub fn cutoff(&self) -> usize {
        self.series[0].cutoff()
    }

    /// `(cos 2 Theta_j - J_0(Gamma_j), i sin 2 Theta_j)` from the Fourier series, `alpha != 0`.
    fn harmonic_parts(&self, site: usize, t: f64) -> (C64, C64) {
        let s = &self.series[site];
        let mut even = C64::new(0.0, 0.0);
        let mut odd = C64::new(0.0, 0.0);
        for a in s.orders().filter(|&a| a != 0) {
            let term = cis(a as f64 * (self.freqs[site] * t + self.phases[site])) * s.get(a);
            if a % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
        }
        (even, odd)
    }

    /// Same quantities evaluated directly from `Theta_j(t)`.
    fn direct_parts(&self, site: usize, t: f64) -> (C64, C64) {
        let th = self.g2 * (self.freqs[site] * t + self.phases[site]).sin() / self.freqs[site];
        let j0 = bessel_j(0, self.series[site].argument());
        (c((2.0 * th).cos() - j0), I * (2.0 * th).sin())
    }

    fn assemble(&self, p1: (C64, C64), p2: (C64, C64)) -> Coefficients {
        let p = self.prefactor;
        Coefficients {
            a0: (p1.0 + p2.0) * p,
            b0: (p1.1 - p2.1) * p,
            c0: (p1.1 + p2.1) * p,
            d0: (p1.0 - p2.0) * p,
        }
    }

    /// Truncated Fourier series.
    pub fn eval(&self, t: f64) -> Coefficients {
        self.assemble(self.harmonic_parts(0, t), self.harmonic_parts(1, t))
    }

    /// Closed form without harmonic truncation.
    pub fn eval_exact(&self, t: f64) -> Coefficients {
        self.assemble(self.direct_parts(0, t), self.direct_parts(1, t))
    }

    /// Fourier coefficient of `B_0` and `C_0` on `e^{i a omega_2 t}`: `-+ p o_a(Gamma_2)`.
    pub fn drive2_odd(&self, alpha: i32) -> f64 {
        self.prefactor * odd_part(alpha, self.series[1].argument())
    }

    pub fn drive_even(&self, site: usize, alpha: i32) -> f64 {
        self.prefactor * even_part(alpha, self.series[site].argument())
    }
}

/// Stationary and harmonic parts of the cat-basis bracket (unscaled), cat order `(Phi1..Phi4)`.
/// `K0F'` holds the `J_0` terms; `K1F'` every `alpha != 0` harmonic up to `cutoff`.
pub fn k0f_k1f(params: &ModelParams, cutoff: Option<usize>, t: f64) -> Result<(Matrix4<C64>, Matrix4<C64>)> {
    let f = CoefficientFunctions::new(0, params, cutoff)?;
    let j1 = bessel_j(0, params.bessel_argument(0));
    let j2 = bessel_j(0, params.bessel_argument(1));
    let ph = cis(-params.gamma() * t);
    let mut k0 = Matrix4::zeros();
    k0[(0, 2)] = ph * (j1 + j2);
    k0[(1, 3)] = ph * (j1 - j2);
    let k0 = k0 + k0.adjoint();
    let p1 = f.harmonic_parts(0, t);
    let p2 = f.harmonic_parts(1, t);
    let mut k1 = Matrix4::zeros();
    k1[(0, 2)] = ph * (p1.0 + p2.0);
    k1[(0, 3)] = ph * (p1.1 - p2.1);
    k1[(1, 2)] = ph * (p1.1 + p2.1);
    k1[(1, 3)] = ph * (p1.0 - p2.0);
    let k1 = k1 + k1.adjoint();
    Ok((k0, k1))
}

/// `(delta/2) H_F''` norm of the rows belonging to Fock level `n`: the coupling the reduced
/// dynamics discards, at time `t`.
pub fn dropped_norm(params: &ModelParams, trunc: FockTruncation, n: usize, t: f64) -> Result<f64> {
    let n_max = trunc.trusted() - 1;
    let hf = hf_matrix(params, trunc, n_max, t)?;
    let levels = n_max + 1;
    let (_, rest) = split_hf(&hf, levels)?;
    let mut sum = 0.0;
    for i in (0..rest.nrows()).filter(|i| i % levels == n) {
        for j in 0..rest.ncols() {
            sum += rest[(i, j)].norm_sqr();
        }
    }
    Ok(0.5 * params.delta.abs() * sum.sqrt())
}
