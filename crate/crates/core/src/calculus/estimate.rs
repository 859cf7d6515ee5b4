use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{theta, theta_alpha, AlphaRep, AnalyticFn, FnRepr, HomInstance, ScalarFunctional};
use crate::error::{Error, Result};
use crate::generate::{point_in_disk, random_coeffs, rng_for};
use crate::linalg::{spectral_norm, Mat};
use crate::scalar::{modulus, Real};

/// Largest polynomial degree drawn by the estimator.
pub const MAX_POLY_DEGREE: usize = 16;
const RESTARTS: usize = 3;
const ZERO_RADIUS: f64 = 0.995;
const MAX_EVALS: usize = 400;

/// Serializable description of a witness function on the unit disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Blaschke { phase: [f64; 2], zeros: Vec<[f64; 2]> },
    /// `p / sup|p|`, with the sup-norm used for the normalization.
    Poly { coeffs: Vec<[f64; 2]>, sup_norm: f64 },
}

fn pair<T: Real>(z: &Complex<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

fn unpair<T: Real>(p: &[f64; 2]) -> Complex<T> {
    Complex::new(T::lit(p[0]), T::lit(p[1]))
}

impl Witness {
    fn from_fn<T: Real>(f: &AnalyticFn<T>, sup: T) -> Self {
        match &f.repr {
            FnRepr::Blaschke { phase, zeros } => Witness::Blaschke {
                phase: pair(phase),
                zeros: zeros.iter().map(pair).collect(),
            },
            FnRepr::Poly { coeffs, .. } => Witness::Poly {
                coeffs: coeffs.iter().map(pair).collect(),
                sup_norm: sup.as_f64(),
            },
            FnRepr::Samples { .. } => unreachable!("the estimator only produces closed-form witnesses"),
        }
    }

    /// The normalized witness as a function on `𝔻`.
    pub fn to_fn<T: Real>(&self) -> Result<AnalyticFn<T>> {
        match self {
            Witness::Blaschke { phase, zeros } => {
                AnalyticFn::blaschke(unpair(phase), zeros.iter().map(unpair).collect())
            }
            Witness::Poly { coeffs, sup_norm } => {
                if !(*sup_norm > 0.0) {
                    return Err(Error::Input("witness polynomial has non-positive sup-norm".into()));
                }
                let s = T::lit(*sup_norm);
                Ok(AnalyticFn::poly(coeffs.iter().map(|c| unpair::<T>(c).unscale(s)).collect()))
            }
        }
    }
}

/// Lower estimates of `‖θ‖` and `‖θ_α‖` over the unit ball of `A(𝔻)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaEstimate {
    pub theta_norm: f64,
    pub theta_alpha_norm: f64,
    pub theta_witness: Witness,
    pub theta_alpha_witness: Witness,
    pub trials: usize,
}

struct Best<T: Real> {
    value: T,
    witness: Option<Witness>,
    zeros: Option<Vec<f64>>,
}

impl<T: Real> Best<T> {
    fn new() -> Self {
        Best {
            value: T::zero(),
            witness: None,
            zeros: None,
        }
    }

    fn offer(&mut self, v: T, f: &AnalyticFn<T>, sup: T, zeros: Option<&[f64]>) {
        if v > self.value || self.witness.is_none() {
            self.value = v;
            self.witness = Some(Witness::from_fn(f, sup));
            self.zeros = zeros.map(|z| z.to_vec());
        }
    }
}

type NormMap<'a, T> = Box<dyn Fn(&AnalyticFn<T>) -> Result<T> + 'a>;

/// One objective `f ↦ ‖Φ(f)‖` of the witness search.
pub(crate) struct Target<'a, T: Real> {
    map: NormMap<'a, T>,
    /// Degree of the Blaschke products searched for this objective.
    degree: usize,
    best: Best<T>,
}

impl<'a, T: Real> Target<'a, T> {
    pub(crate) fn new(degree: usize, map: impl Fn(&AnalyticFn<T>) -> Result<T> + 'a) -> Self {
        Target {
            map: Box::new(map),
            degree,
            best: Best::new(),
        }
    }

    pub(crate) fn value(&self) -> T {
        self.best.value
    }

    pub(crate) fn witness(&self) -> Witness {
        self.best.witness.clone().expect("search evaluated at least one candidate")
    }
}

/// Evaluates every target at `f/sup` and records improvements.
fn offer_all<T: Real>(targets: &mut [Target<'_, T>], f: &AnalyticFn<T>, sup: T, zeros: Option<&[f64]>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(targets.len());
    for t in targets.iter_mut() {
        let v = (t.map)(f)? / sup;
        t.best.offer(v, f, sup, zeros);
        out.push(v);
    }
    Ok(out)
}

fn blaschke_from<T: Real>(x: &[f64]) -> AnalyticFn<T> {
    let zeros = x.chunks(2).map(|c| Complex::new(T::lit(c[0]), T::lit(c[1]))).collect();
    AnalyticFn {
        repr: FnRepr::Blaschke {
            phase: Complex::new(T::one(), T::zero()),
            zeros,
        },
        tag: super::DomainTag::Disk,
    }
}

fn project(x: &mut [f64]) {
    for c in x.chunks_mut(2) {
        let r = (c[0] * c[0] + c[1] * c[1]).sqrt();
        if r > ZERO_RADIUS {
            c[0] *= ZERO_RADIUS / r;
            c[1] *= ZERO_RADIUS / r;
        }
    }
}

/// Derivative-free coordinate search over the zeros of a Blaschke product, maximizing
/// target `goal`; every candidate is offered to all targets.
fn coordinate_search<T: Real>(targets: &mut [Target<'_, T>], goal: usize, start: Vec<f64>) -> Result<()> {
    let mut score = |x: &[f64]| -> Result<T> {
        Ok(offer_all(targets, &blaschke_from(x), T::one(), Some(x))?[goal])
    };
    let mut x = start;
    project(&mut x);
    let mut fx = score(&x)?;
    if x.is_empty() {
        return Ok(());
    }
    let mut step = 0.3;
    let mut evals = 1;
    while step > 1e-3 && evals < MAX_EVALS {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += dir * step;
                project(&mut y);
                let fy = score(&y)?;
                evals += 1;
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(())
}

/// Runs `budget` seeded trials of the witness search over all targets.
///
/// Trial `i` draws from its own random stream, so every target's estimate is
/// nondecreasing in the budget.  Every third trial is a random polynomial of degree at
/// most 16 normalized by its sup-norm on the circle; the others are coordinate searches
/// over Blaschke zeros (three restarts each), cycling through the targets.  The first
/// search for each target starts from `z^degree`.
pub(crate) fn search<T: Real>(targets: &mut [Target<'_, T>], budget: usize, seed: u64) -> Result<()> {
    if budget == 0 {
        return Err(Error::Parameter("estimator budget must be at least 1".into()));
    }
    let m = targets.len();
    offer_all(targets, &AnalyticFn::poly(vec![Complex::new(T::one(), T::zero())]), T::one(), None)?;
    for trial in 0..budget {
        let mut rng = rng_for(seed, trial as u64);
        if trial % 3 == 2 {
            let d = rng.random_range(1..=MAX_POLY_DEGREE);
            let p = AnalyticFn::poly(random_coeffs::<T, _>(d, &mut rng));
            let sup = p.circle_sup_refined();
            if sup > T::zero() {
                offer_all(targets, &p, sup, None)?;
            }
            continue;
        }
        let b = (trial / 3) * 2 + trial % 3;
        let goal = b % m;
        let degree = targets[goal].degree;
        for restart in 0..RESTARTS {
            let start: Vec<f64> = if b < m && restart == 0 {
                vec![0.0; 2 * degree]
            } else {
                (0..degree)
                    .flat_map(|_| {
                        let z: Complex<f64> = point_in_disk(&mut rng, 0.9);
                        [z.re, z.im]
                    })
                    .collect()
            };
            coordinate_search(targets, goal, start)?;
        }
    }
    Ok(())
}

/// Continues the search for target `goal` from the best Blaschke witness of target
/// `from`, padding with zeros near the circle up to the goal's degree.
pub(crate) fn polish_from<T: Real>(targets: &mut [Target<'_, T>], from: usize, goal: usize) -> Result<()> {
    if let Some(mut x) = targets[from].best.zeros.clone() {
        while x.len() < 2 * targets[goal].degree {
            x.extend_from_slice(&[0.99, 0.0]);
        }
        x.truncate(2 * targets[goal].degree);
        coordinate_search(targets, goal, x)?;
    }
    Ok(())
}

/// Lower estimates of `‖θ‖` and `‖θ_α‖` from `budget` seeded trials.
///
/// Blaschke searches have degree `dim(T) − 1` and alternate between the two norms.
pub fn estimate_theta_norm<T: Real>(
    inst: &HomInstance<T>,
    alpha: &AlphaRep<T>,
    budget: usize,
    seed: u64,
) -> Result<ThetaEstimate> {
    let degree = inst.dim() - 1;
    let mut targets = [
        Target::new(degree, |f: &AnalyticFn<T>| Ok(spectral_norm(&theta(f, inst)))),
        Target::new(degree, |f: &AnalyticFn<T>| Ok(spectral_norm(&theta_alpha(f, inst, alpha)?))),
    ];
    search(&mut targets, budget, seed)?;
    Ok(ThetaEstimate {
        theta_norm: targets[0].value().as_f64(),
        theta_alpha_norm: targets[1].value().as_f64(),
        theta_witness: targets[0].witness(),
        theta_alpha_witness: targets[1].witness(),
        trials: budget,
    })
}

/// Lower estimates of `‖θ‖` and `‖θ + βI‖` over the same witness family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShiftEstimate {
    pub theta_norm: f64,
    pub shifted_norm: f64,
    pub theta_witness: Witness,
    pub shifted_witness: Witness,
    pub trials: usize,
}

/// Searches `‖θ‖` with Blaschke degree `dim(T) − 1` and `‖θ + βI‖` with degree `dim(T)`,
/// then continues the shifted search from the best `θ` witness.
pub fn estimate_shift_norm<T: Real>(
    inst: &HomInstance<T>,
    beta: &ScalarFunctional<T>,
    budget: usize,
    seed: u64,
) -> Result<ShiftEstimate> {
    let n = inst.dim();
    let mut targets = [
        Target::new(n - 1, |f: &AnalyticFn<T>| Ok(spectral_norm(&theta(f, inst)))),
        Target::new(n, |f: &AnalyticFn<T>| {
            let m = theta(f, inst).into_inner() + Mat::<T>::identity(n, n) * beta.apply(f);
            Ok(crate::linalg::op_norm(&m))
        }),
    ];
    search(&mut targets, budget, seed)?;
    polish_from(&mut targets, 0, 1)?;
    Ok(ShiftEstimate {
        theta_norm: targets[0].value().as_f64(),
        shifted_norm: targets[1].value().as_f64(),
        theta_witness: targets[0].witness(),
        shifted_witness: targets[1].witness(),
        trials: budget,
    })
}

/// `max |f|` over the unit circle, used to normalize witnesses.
pub fn witness_sup<T: Real>(f: &AnalyticFn<T>) -> T {
    match &f.repr {
        FnRepr::Blaschke { phase, .. } => modulus(*phase),
        _ => f.circle_sup_refined(),
    }
}
