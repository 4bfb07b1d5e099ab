use super::systems::{Autonomous, FlowError};
use crate::scalars::{rational_to_f64, Coeff, Jet2};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Completed,
    StoppedNearSingularity,
}

/// Sampled solution. Derivative slots come from the right-hand side, not from
/// differencing; `d3` is kept because frame scalings involving `f'` need it.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub names: Vec<String>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub d1: Vec<Vec<f64>>,
    pub d2: Vec<Vec<f64>>,
    pub d3: Vec<Vec<f64>>,
    pub status: Status,
    /// Why integration stopped early, if it did.
    pub stop_reason: Option<String>,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().expect("trajectory has the initial node")
    }

    /// Index of the node at time `t` (within `1e-12`).
    pub fn node_at(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| (s - t).abs() <= 1e-12 * (1.0 + t.abs()))
    }

    /// 3-jet of component `i` at node `n`, packed as value and 2-jet of the derivative.
    pub fn jet(&self, n: usize, i: usize) -> (Jet2<f64>, f64) {
        (Jet2::new(self.values[n][i], self.d1[n][i], self.d2[n][i]), self.d3[n][i])
    }

    /// Whitespace-separated table: `t`, then value, first and second
    /// derivative of every unknown.
    pub fn to_table(&self) -> String {
        let mut header = vec!["t".to_string()];
        for n in &self.names {
            header.push(n.clone());
            header.push(format!("{n}'"));
            header.push(format!("{n}''"));
        }
        let mut out = header.join("\t");
        out.push('\n');
        for (k, t) in self.times.iter().enumerate() {
            let mut row = vec![format!("{t:.12e}")];
            for i in 0..self.names.len() {
                row.push(format!("{:.15e}", self.values[k][i]));
                row.push(format!("{:.15e}", self.d1[k][i]));
                row.push(format!("{:.15e}", self.d2[k][i]));
            }
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }
}

/// First three derivatives of the solution through `y`, by evaluating the
/// right-hand side on jets.
pub fn derivatives<S: Autonomous>(sys: &S, y: &[f64]) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    derivatives_in(sys, y)
}

/// [`derivatives`] in any coefficient ring; over the rationals this gives
/// exact Taylor data at the initial state.
pub fn derivatives_in<S: Autonomous, C: Coeff>(sys: &S, y: &[C]) -> Option<(Vec<C>, Vec<C>, Vec<C>)> {
    let d1 = sys.rhs::<C>(y)?;
    let j: Vec<Jet2<C>> = y.iter().zip(&d1).map(|(v, d)| Jet2::new(v.clone(), d.clone(), C::zero())).collect();
    let d2: Vec<C> = sys.rhs(&j)?.into_iter().map(|x| x.d1).collect();
    let j: Vec<Jet2<C>> =
        y.iter().zip(&d1).zip(&d2).map(|((v, a), b)| Jet2::new(v.clone(), a.clone(), b.clone())).collect();
    let d3: Vec<C> = sys.rhs(&j)?.into_iter().map(|x| x.d2).collect();
    Some((d1, d2, d3))
}

#[derive(Clone, Debug)]
pub struct IntegrateOptions {
    pub tol: f64,
    /// Times the integrator must land on exactly (same sign as `t_end`).
    pub stops: Vec<f64>,
    pub max_steps: usize,
    pub min_step: f64,
}

impl IntegrateOptions {
    pub fn new(tol: f64) -> Self {
        IntegrateOptions { tol, stops: Vec::new(), max_steps: 1_000_000, min_step: 1e-12 }
    }

    pub fn with_stops(mut self, stops: &[f64]) -> Self {
        self.stops = stops.to_vec();
        self
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One trial step; `None` if the right-hand side leaves its domain.
fn dopri_step<S: Autonomous>(sys: &S, y: &[f64], h: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = y.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let ys: Vec<f64> = (0..n).map(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>()).collect();
        let ks = sys.rhs::<f64>(&ys)?;
        if ks.iter().any(|v| !v.is_finite()) {
            return None;
        }
        k.push(ks);
    }
    let y5: Vec<f64> = (0..n).map(|i| y[i] + h * (0..7).map(|s| B5[s] * k[s][i]).sum::<f64>()).collect();
    let err: Vec<f64> = (0..n).map(|i| h * (0..7).map(|s| (B5[s] - B4[s]) * k[s][i]).sum::<f64>()).collect();
    Some((y5, err))
}

/// Adaptive Dormand–Prince 5(4) integration from `t = 0` to `t_end`
/// (backwards if `t_end < 0`), starting at the system's initial state.
pub fn integrate<S: Autonomous>(sys: &S, t_end: f64, opts: &IntegrateOptions) -> Result<Trajectory, FlowError> {
    if !(opts.tol > 0.0) {
        return Err(FlowError::BadTolerance);
    }
    let y0: Vec<f64> = sys.initial().iter().map(rational_to_f64).collect();
    if let Some(reason) = sys.guard(&y0) {
        return Err(FlowError::SingularStart(reason));
    }
    let (d1, d2, d3) = derivatives(sys, &y0).ok_or_else(|| FlowError::SingularStart("right-hand side undefined".into()))?;
    let dir = if t_end < 0.0 { -1.0 } else { 1.0 };
    let mut stops: Vec<f64> = opts.stops.iter().copied().filter(|s| s * dir > 0.0 && s.abs() < t_end.abs()).collect();
    stops.push(t_end);
    stops.sort_by(|a, b| (a * dir).partial_cmp(&(b * dir)).expect("finite stop times"));
    stops.dedup();

    let mut traj = Trajectory {
        names: sys.names(),
        times: vec![0.0],
        values: vec![y0.clone()],
        d1: vec![d1],
        d2: vec![d2],
        d3: vec![d3],
        status: Status::Completed,
        stop_reason: None,
        rejected_steps: 0,
    };
    if t_end == 0.0 {
        return Ok(traj);
    }
    let mut t = 0.0f64;
    let mut y = y0;
    let mut h = dir * (t_end.abs() * 1e-3).clamp(1e-8, 1e-2);
    let mut next_stop = 0;
    let mut last_reason = None;
    // After the guard has fired the step never grows again, so the approach
    // to the singularity terminates.
    let mut near_singular = false;
    for _ in 0..opts.max_steps {
        let target = stops[next_stop];
        let mut landing = false;
        if (t + h - target) * dir >= 0.0 {
            h = target - t;
            landing = true;
        }
        let trial = dopri_step(sys, &y, h).and_then(|(yn, err)| {
            if let Some(reason) = sys.guard(&yn) {
                last_reason = Some(reason);
                return None;
            }
            let en = err
                .iter()
                .zip(&yn)
                .map(|(e, v)| (e / (opts.tol * (1.0 + v.abs()))).abs())
                .fold(0.0f64, f64::max);
            Some((yn, en))
        });
        match trial {
            None => {
                traj.rejected_steps += 1;
                near_singular = true;
                h *= 0.5;
            }
            Some((yn, en)) if en <= 1.0 => {
                match derivatives(sys, &yn) {
                    Some((a, b, c)) => {
                        t = if landing { target } else { t + h };
                        y = yn;
                        traj.times.push(t);
                        traj.values.push(y.clone());
                        traj.d1.push(a);
                        traj.d2.push(b);
                        traj.d3.push(c);
                    }
                    None => {
                        traj.rejected_steps += 1;
                        h *= 0.5;
                        continue;
                    }
                }
                if landing {
                    next_stop += 1;
                    if next_stop == stops.len() {
                        return Ok(traj);
                    }
                }
                let cap = if near_singular { 1.0 } else { 5.0 };
                let factor = if en == 0.0 { cap } else { (0.9 * en.powf(-0.2)).clamp(0.2, cap) };
                h *= factor;
            }
            Some((_, en)) => {
                traj.rejected_steps += 1;
                h *= (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
            }
        }
        if h.abs() < opts.min_step {
            traj.status = Status::StoppedNearSingularity;
            traj.stop_reason = Some(last_reason.unwrap_or_else(|| "step size underflow".into()));
            return Ok(traj);
        }
    }
    traj.status = Status::StoppedNearSingularity;
    traj.stop_reason = Some("step limit reached".into());
    Ok(traj)
}
