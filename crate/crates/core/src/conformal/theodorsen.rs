use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geom::ConvexDomain;
use crate::scalar::{arg, cis, modulus, Real};
use crate::trig::TrigSeries;

const MAX_ITERATIONS: usize = 4000;
/// Consecutive growing updates that count as divergence.
const GROWTH_LIMIT: usize = 5;

pub(super) struct Solution<T: Real> {
    /// Boundary angle `s(t_k)` at the uniform parameters `t_k = 2πk/n`.
    pub angles: Vec<T>,
    pub trace: Vec<f64>,
}

/// Polar radius `R(θ)` and boundary parameter `t(θ)` of `∂Ω` about `z0`.
struct Polar<T: Real> {
    log_radius: TrigSeries<T>,
    /// `t(θ) − θ`.
    param_shift: TrigSeries<T>,
}

fn polar_representation<T: Real>(domain: &ConvexDomain<T>, z0: Complex<T>, m: usize) -> Result<Polar<T>> {
    let step = T::two_pi() / T::from_usize_lossy(m);
    let table: Vec<(T, T)> = {
        // (t, unwrapped polar angle) on a uniform parameter grid
        let mut out = Vec::with_capacity(m + 1);
        let mut prev = arg(domain.gamma(T::zero()) - z0);
        out.push((T::zero(), prev));
        for p in 1..=m {
            let t = step * T::from_usize_lossy(p);
            let raw = arg(domain.gamma(t) - z0);
            let mut d = raw - prev.rem_2pi();
            while d <= -T::pi() {
                d += T::two_pi();
            }
            while d > T::pi() {
                d -= T::two_pi();
            }
            if !(d > T::zero()) {
                return Err(Error::Domain(
                    "boundary is not star-shaped about the normalization point".into(),
                ));
            }
            prev += d;
            out.push((t, prev));
        }
        out
    };
    let psi0 = table[0].1;
    let mut log_r = Vec::with_capacity(m);
    let mut shift = Vec::with_capacity(m);
    for j in 0..m {
        let theta = step * T::from_usize_lossy(j);
        // lift θ into [ψ_0, ψ_0 + 2π)
        let lifted = theta + T::two_pi() * ((psi0 - theta) / T::two_pi()).ceil();
        let idx = table.partition_point(|(_, psi)| *psi <= lifted).clamp(1, m) - 1;
        let (mut lo, mut hi) = (table[idx].0, table[idx + 1].0);
        let rot = cis(-theta);
        let (psi_lo, psi_hi) = (table[idx].1, table[idx + 1].1);
        let mut t = lo + (hi - lo) * (lifted - psi_lo) / (psi_hi - psi_lo);
        let mut radius = T::zero();
        for _ in 0..60 {
            let j = domain.jet(t);
            radius = modulus(j.z - z0);
            let v = arg((j.z - z0) * rot);
            if v > T::zero() {
                hi = t;
            } else {
                lo = t;
            }
            let slope = (j.d1 / (j.z - z0)).im;
            let mut next = t - v / slope;
            if !(next > lo && next < hi) {
                next = (lo + hi) / T::lit(2.0);
            }
            let done = (next - t).abs() <= T::default_epsilon() * T::lit(8.0);
            t = next;
            if done || hi - lo <= T::default_epsilon() * T::lit(8.0) {
                break;
            }
        }
        log_r.push(radius.ln());
        shift.push(t - theta);
    }
    // t(θ) − θ must be continuous and periodic
    for j in 1..m {
        let k = ((shift[j] - shift[j - 1]) / T::two_pi()).round();
        shift[j] -= k * T::two_pi();
    }
    Ok(Polar {
        log_radius: trimmed(TrigSeries::from_samples(&log_r)),
        param_shift: trimmed(TrigSeries::from_samples(&shift)),
    })
}

/// Drops trailing modes below rounding level.
fn trimmed<T: Real>(s: TrigSeries<T>) -> TrigSeries<T> {
    let peak = s
        .coeffs()
        .iter()
        .fold(T::zero(), |m, c| m.max(c.norm_sqr().sqrt()));
    let floor = peak * T::default_epsilon() * T::lit(8.0);
    let keep = s
        .coeffs()
        .iter()
        .rposition(|c| c.norm_sqr().sqrt() > floor)
        .unwrap_or(0);
    s.truncated(keep)
}

/// Theodorsen's iteration `θ(s) = s + K[log R(θ(s))]`, under-relaxed by `1/(1 + ε²)` with
/// `ε = max |R'/R|`.
pub(super) fn solve<T: Real>(domain: &ConvexDomain<T>, z0: Complex<T>, n: usize) -> Result<Solution<T>> {
    let m = (4 * n).max(1024).next_power_of_two();
    let polar = polar_representation(domain, z0, m)?;
    let eps = (0..m)
        .map(|j| {
            let th = T::two_pi() * T::from_usize_lossy(j) / T::from_usize_lossy(m);
            polar.log_radius.derivatives::<2>(th)[1].abs()
        })
        .fold(T::zero(), |a, b| a.max(b));
    let omega = T::one() / (T::one() + eps * eps);
    let tol = (T::default_epsilon() * T::lit(256.0)).max(T::lit(1e-13));
    let floor = T::lit(1e-10).max(T::default_epsilon() * T::lit(1e4));

    let s: Vec<T> = (0..n)
        .map(|j| T::two_pi() * T::from_usize_lossy(j) / T::from_usize_lossy(n))
        .collect();
    let mut theta = s.clone();
    let mut trace = Vec::new();
    let mut growth = 0;
    let mut prev = T::max_value().unwrap_or_else(|| T::lit(1e300));
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let logs: Vec<T> = theta.iter().map(|th| polar.log_radius.eval(*th)).collect();
        let conj = TrigSeries::from_samples(&logs).conjugate().sample(n);
        let mut delta = T::zero();
        for j in 0..n {
            let update = s[j] + conj[j] - theta[j];
            delta = delta.max(update.abs());
            theta[j] += omega * update;
        }
        trace.push(delta.as_f64());
        if delta <= tol {
            converged = true;
            break;
        }
        if delta > prev {
            growth += 1;
            if growth >= GROWTH_LIMIT {
                if delta <= floor {
                    converged = true;
                    break;
                }
                return Err(Error::Numerical {
                    message: format!(
                        "Theodorsen iteration diverged (update grew {GROWTH_LIMIT} times in a row)"
                    ),
                    trace,
                });
            }
        } else {
            growth = 0;
        }
        prev = delta;
    }
    if !converged {
        return Err(Error::Numerical {
            message: format!("Theodorsen iteration did not converge in {MAX_ITERATIONS} steps"),
            trace,
        });
    }

    // boundary parameter at the uniform disk angles, then invert to uniform parameters
    let mut shift = Vec::with_capacity(n);
    for j in 0..n {
        let t = theta[j] + polar.param_shift.eval(theta[j]);
        shift.push(t - s[j]);
    }
    for j in 0..n {
        let next = if j + 1 < n { s[j + 1] + shift[j + 1] } else { T::two_pi() + s[0] + shift[0] };
        if !(next > s[j] + shift[j]) {
            return Err(Error::Numerical {
                message: "Theodorsen boundary correspondence is not monotone".into(),
                trace,
            });
        }
    }
    let u = TrigSeries::from_samples(&shift);
    let angles = (0..n)
        .map(|k| u.solve_shifted(T::two_pi() * T::from_usize_lossy(k) / T::from_usize_lossy(n)))
        .collect();
    Ok(Solution { angles, trace })
}

trait Wrap {
    fn rem_2pi(self) -> Self;
}

impl<T: Real> Wrap for T {
    /// Principal representative in `(−π, π]`.
    fn rem_2pi(self) -> T {
        let p = T::two_pi();
        let mut r = self - (self / p).round() * p;
        if r <= -T::pi() {
            r += p;
        }
        r
    }
}
