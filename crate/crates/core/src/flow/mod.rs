//! Evolution equations: the per-family hypo flow reduced to one unknown, the
//! two Hitchin systems for `(f, h, k)`, and an adaptive integrator.

mod integrator;
mod systems;

pub use integrator::{derivatives, derivatives_in, integrate, IntegrateOptions, Status, Trajectory};
pub use systems::{
    build_hitchin_system, build_hypo_ode, Autonomous, FlowError, HitchinKind, HitchinSystem, ScalarOde, SecondOrder,
    GUARD,
};

use crate::scalars::{jet_pow, rat, rational_to_f64, Jet2};
use rayon::prelude::*;

/// `max |Q(f, f') − Q(1, 2)|` over the trajectory nodes.
pub fn first_integral_drift(ode: &ScalarOde, traj: &Trajectory) -> f64 {
    let q0 = rational_to_f64(&ode.conserved_value());
    traj.values
        .iter()
        .zip(&traj.d1)
        .map(|(v, d)| (ode.first_integral(&v[0], &d[0]) - q0).abs())
        .fold(0.0, f64::max)
}

/// `max |second-order residual|` over the nodes of a first-order trajectory.
pub fn second_order_residual_max(ode: &ScalarOde, traj: &Trajectory) -> f64 {
    (0..traj.len())
        .map(|n| ode.second_order_residual(&traj.values[n][0], &traj.d1[n][0], &traj.d2[n][0]).abs())
        .fold(0.0, f64::max)
}

/// `f(t) = (1+4t)^(1/2)`, the F2 solution with `r = 0`.
pub fn explicit_su3(t: f64) -> Jet2<f64> {
    jet_pow(&Jet2::new(1.0 + 4.0 * t, 4.0, 0.0), &rat(1, 2)).expect("1 + 4t > 0")
}

/// `(f, h, k) = ((1+5t)^(3/5), (1+5t)^(-1/5), (1+5t)^(-2/5))`, the K solution
/// with `a = b = 0`, `a1 = 2`.
pub fn explicit_g2(t: f64) -> [Jet2<f64>; 3] {
    let u = Jet2::new(1.0 + 5.0 * t, 5.0, 0.0);
    [rat(3, 5), rat(-1, 5), rat(-2, 5)].map(|p| jet_pow(&u, &p).expect("1 + 5t > 0"))
}

/// Componentwise `max |y' − F(y)|` along explicitly given jets.
pub fn rhs_residual<S: Autonomous>(sys: &S, jets: &[Jet2<f64>]) -> f64 {
    let y: Vec<f64> = jets.iter().map(|j| j.v).collect();
    match sys.rhs::<f64>(&y) {
        Some(f) => f.iter().zip(jets).map(|(a, j)| (a - j.d1).abs()).fold(0.0, f64::max),
        None => f64::INFINITY,
    }
}

/// Integrate several systems in parallel (results in input order).
pub fn integrate_many<S: Autonomous + Send>(systems: &[S], t_end: f64, opts: &IntegrateOptions) -> Vec<Result<Trajectory, FlowError>> {
    systems.par_iter().map(|s| integrate(s, t_end, opts)).collect()
}
