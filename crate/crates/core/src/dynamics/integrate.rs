use super::generator::generator_numeric;
use super::{family_map, singular_times, FamilyParams};
use crate::bloch::Mat4;
use crate::error::{Error, Result};
use crate::matlin::{bloch_operator, DensityOperator};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions<T: Real> {
    /// Bridge singular windows `(t_s - margin, t_s + margin)` with the closed form.
    pub segment: bool,
    /// Half-width of the excluded window; `None` means `1e-3 * n`.
    pub margin: Option<T>,
}

impl<T: Real> Default for IntegrateOptions<T> {
    fn default() -> Self {
        Self { segment: false, margin: None }
    }
}

/// Bloch-vector samples of an integrated trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub bloch: Vec<[T; 3]>,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> Option<(T, [T; 3])> {
        Some((*self.times.last()?, *self.bloch.last()?))
    }

    /// The samples as density operators; integration error may push a pure
    /// state marginally outside the ball, hence the loose positivity check.
    pub fn states(&self) -> Result<Vec<DensityOperator<T>>> {
        self.bloch
            .iter()
            .map(|r| DensityOperator::with_tolerances(bloch_operator(*r), T::equality_tol(), T::lit(1e-6)))
            .collect()
    }
}

/// Fixed-step classical RK4 for `d(1, r)/dt = L_t (1, r)` with the numeric
/// generator. Intervals containing a singular time (within the margin) are
/// rejected unless `segment` is set, in which case each singular window is
/// crossed exactly by `E_{t_s + m} E_{t_s - m}^{-1}`.
pub fn integrate<T: Real>(
    rho0: &DensityOperator<T>,
    t0: T,
    t1: T,
    steps: usize,
    p: &FamilyParams<T>,
    opts: IntegrateOptions<T>,
) -> Result<Trajectory<T>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be positive".into()));
    }
    if !(t1 >= t0) {
        return Err(Error::InvalidArgument("integration requires t1 >= t0".into()));
    }
    let r0 = rho0.bloch()?;
    let margin = opts.margin.unwrap_or_else(|| p.singular_margin());
    let singular = singular_times(p, t0 - margin, t1 + margin);

    let mut windows = Vec::new();
    for &ts in &singular {
        let inside = ts - margin > t0 && ts + margin < t1;
        if !opts.segment || !inside {
            let det = family_map(ts, p).det3();
            return Err(Error::SingularAt { t: ts.to_f64_lossy(), det: det.to_f64_lossy() });
        }
        windows.push((ts - margin, ts + margin));
    }

    // Integration segments between windows.
    let mut segments = Vec::new();
    let mut start = t0;
    for &(a, b) in &windows {
        segments.push((start, a));
        start = b;
    }
    segments.push((start, t1));

    let total: T = segments.iter().map(|(a, b)| *b - *a).sum();
    let mut traj = Trajectory { times: vec![t0], bloch: vec![r0] };
    let mut v = [T::one(), r0[0], r0[1], r0[2]];

    for (idx, &(a, b)) in segments.iter().enumerate() {
        if idx > 0 {
            let (wa, wb) = windows[idx - 1];
            let jump = *family_map(wb, p).matrix() * family_map(wa, p).matrix().inverse()?;
            v = jump.apply(v);
            traj.times.push(wb);
            traj.bloch.push([v[1], v[2], v[3]]);
        }
        let len = b - a;
        let seg_steps = if total > T::zero() {
            (len / total * T::from_usize(steps).unwrap()).round().to_usize().unwrap_or(1).max(1)
        } else {
            1
        };
        let h = len / T::from_usize(seg_steps).unwrap();
        for i in 0..seg_steps {
            let t = a + h * T::from_usize(i).unwrap();
            v = rk4_step(v, t, h, p)?;
            traj.times.push(t + h);
            traj.bloch.push([v[1], v[2], v[3]]);
        }
    }
    Ok(traj)
}

fn rk4_step<T: Real>(v: [T; 4], t: T, h: T, p: &FamilyParams<T>) -> Result<[T; 4]> {
    let half = h / T::lit(2.0);
    let l0 = generator_numeric(t, p)?;
    let lm = generator_numeric(t + half, p)?;
    let l1 = generator_numeric(t + h, p)?;
    let add = |a: [T; 4], b: [T; 4], s: T| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2], a[3] + s * b[3]];
    let f = |l: &Mat4<T>, x: [T; 4]| l.apply(x);
    let k1 = f(&l0, v);
    let k2 = f(&lm, add(v, k1, half));
    let k3 = f(&lm, add(v, k2, half));
    let k4 = f(&l1, add(v, k3, h));
    let sixth = h / T::lit(6.0);
    let mut out = v;
    for i in 0..4 {
        out[i] = v[i] + sixth * (k1[i] + T::lit(2.0) * k2[i] + T::lit(2.0) * k3[i] + k4[i]);
    }
    Ok(out)
}
