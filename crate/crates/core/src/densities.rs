//! Pointwise Lagrangian densities and their exact partial derivatives, plus
//! force models.
//!
//! Every density evaluates to its value together with all first partials at
//! a point `(phi, nu, grad)`. The partials must be analytic: the discrete
//! functional-derivative identities in [`crate::dynamics`] are exact only
//! when the pointwise derivatives are. Custom densities are therefore
//! checked against central differences when they are registered.

use crate::grid::{BoundaryField, Grid, ScalarField, MAX_DIM};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Value and first partials of a density at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEval {
    pub value: f64,
    pub d_phi: f64,
    pub d_nu: f64,
    pub d_grad: [f64; MAX_DIM],
}

/// Signature of a user-supplied density: position, field value, velocity
/// value, gradient.
pub type CustomDensityFn =
    dyn Fn(&[f64; MAX_DIM], f64, f64, &[f64; MAX_DIM]) -> DensityEval + Send + Sync;

/// A pointwise Lagrangian density.
///
/// The built-in kinds cover the wave/membrane family (optionally with a
/// Klein-Gordon or sine-Gordon potential) and the lossless transmission
/// line. `Custom` takes a closure with analytic partials and an extra
/// position argument for densities that depend explicitly on x.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensitySpec {
    Wave {
        rho0: f64,
        tau: f64,
    },
    KleinGordon {
        rho0: f64,
        tau: f64,
        mass: f64,
        lambda: f64,
        /// Exponent of the self-interaction term; kept integral so the
        /// potential is defined for negative field values.
        p: u32,
    },
    SineGordon {
        rho0: f64,
        tau: f64,
    },
    Telegraph {
        inductance: f64,
        capacitance: f64,
    },
    #[serde(skip)]
    Custom {
        name: String,
        eval: Arc<CustomDensityFn>,
    },
}

impl fmt::Debug for DensitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensitySpec::Wave { rho0, tau } => {
                write!(f, "Wave {{ rho0: {rho0}, tau: {tau} }}")
            }
            DensitySpec::KleinGordon {
                rho0,
                tau,
                mass,
                lambda,
                p,
            } => write!(
                f,
                "KleinGordon {{ rho0: {rho0}, tau: {tau}, mass: {mass}, \
                 lambda: {lambda}, p: {p} }}"
            ),
            DensitySpec::SineGordon { rho0, tau } => {
                write!(f, "SineGordon {{ rho0: {rho0}, tau: {tau} }}")
            }
            DensitySpec::Telegraph {
                inductance,
                capacitance,
            } => write!(
                f,
                "Telegraph {{ inductance: {inductance}, capacitance: {capacitance} }}"
            ),
            DensitySpec::Custom { name, .. } => write!(f, "Custom {{ name: {name:?} }}"),
        }
    }
}

impl DensitySpec {
    /// Validate positivity constraints.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(format!("{what} must be positive")));
        match self {
            DensitySpec::Wave { rho0, tau } | DensitySpec::SineGordon { rho0, tau } => {
                if *rho0 <= 0.0 {
                    return bad("rho0");
                }
                if *tau <= 0.0 {
                    return bad("tau");
                }
            }
            DensitySpec::KleinGordon { rho0, tau, p, .. } => {
                if *rho0 <= 0.0 {
                    return bad("rho0");
                }
                if *tau <= 0.0 {
                    return bad("tau");
                }
                if *p < 2 {
                    return Err(Error::InvalidParameter(
                        "Klein-Gordon exponent p must be at least 2".into(),
                    ));
                }
            }
            DensitySpec::Telegraph {
                inductance,
                capacitance,
            } => {
                if *inductance <= 0.0 {
                    return bad("inductance");
                }
                if *capacitance <= 0.0 {
                    return bad("capacitance");
                }
            }
            DensitySpec::Custom { .. } => {}
        }
        Ok(())
    }

    /// Register a custom density; the analytic partials are cross-checked
    /// against central differences at a few probe points.
    pub fn custom(name: &str, eval: Arc<CustomDensityFn>) -> Result<Self> {
        let spec = DensitySpec::Custom {
            name: name.to_string(),
            eval,
        };
        let probes = [
            ([0.0; MAX_DIM], 0.3, -0.7, [0.2, -0.1, 0.4]),
            ([0.5, 0.25, 0.75], -1.1, 0.9, [-0.6, 0.3, 0.1]),
            ([1.0, 0.0, 0.5], 0.05, 0.0, [0.0, 0.0, 0.0]),
        ];
        for (x, phi, nu, g) in probes {
            let err = fd_check_at(&spec, &x, phi, nu, &g, 1e-6);
            if err > 1e-5 {
                return Err(Error::InvalidParameter(format!(
                    "custom density {name:?} has inconsistent analytic partials \
                     (finite-difference mismatch {err:.3e})"
                )));
            }
        }
        Ok(spec)
    }

    /// Constant mass in front of the velocity, when the density is
    /// separable (quadratic in nu with state-independent coefficient).
    /// The explicit leapfrog stepper requires this.
    pub fn separable_mass(&self) -> Option<f64> {
        match self {
            DensitySpec::Wave { rho0, .. }
            | DensitySpec::KleinGordon { rho0, .. }
            | DensitySpec::SineGordon { rho0, .. } => Some(*rho0),
            DensitySpec::Telegraph { inductance, .. } => Some(*inductance),
            DensitySpec::Custom { .. } => None,
        }
    }

    /// True when the density is a quadratic form of `(phi, nu, grad)`, so
    /// the implicit midpoint equations are linear and their Jacobian is
    /// state independent.
    pub fn is_quadratic(&self) -> bool {
        match self {
            DensitySpec::Wave { .. } | DensitySpec::Telegraph { .. } => true,
            DensitySpec::KleinGordon { lambda, .. } => *lambda == 0.0,
            DensitySpec::SineGordon { .. } | DensitySpec::Custom { .. } => false,
        }
    }
}

/// Evaluate a density and its partials at one point. `x` is only read by
/// custom densities.
pub fn eval_density(
    spec: &DensitySpec,
    x: &[f64; MAX_DIM],
    phi: f64,
    nu: f64,
    grad: &[f64; MAX_DIM],
) -> DensityEval {
    match spec {
        DensitySpec::Wave { rho0, tau } => wave_family(*rho0, *tau, nu, grad, 0.0, 0.0),
        DensitySpec::KleinGordon {
            rho0,
            tau,
            mass,
            lambda,
            p,
        } => {
            let u = 0.5 * mass * mass * phi * phi
                + lambda / (*p as f64 + 1.0) * phi.powi(*p as i32 + 1);
            let du = mass * mass * phi + lambda * phi.powi(*p as i32);
            wave_family(*rho0, *tau, nu, grad, u, du)
        }
        DensitySpec::SineGordon { rho0, tau } => {
            wave_family(*rho0, *tau, nu, grad, 1.0 - phi.cos(), phi.sin())
        }
        DensitySpec::Telegraph {
            inductance,
            capacitance,
        } => {
            let g2: f64 = grad.iter().map(|g| g * g).sum();
            let mut d_grad = [0.0; MAX_DIM];
            for (d, g) in d_grad.iter_mut().zip(grad) {
                *d = -g / capacitance;
            }
            DensityEval {
                value: 0.5 * inductance * nu * nu - 0.5 / capacitance * g2,
                d_phi: 0.0,
                d_nu: inductance * nu,
                d_grad,
            }
        }
        DensitySpec::Custom { eval, .. } => eval(x, phi, nu, grad),
    }
}

/// Wave density with an optional potential `u(phi)`:
/// `rho0/2 nu^2 - tau/2 |grad|^2 - u`.
fn wave_family(
    rho0: f64,
    tau: f64,
    nu: f64,
    grad: &[f64; MAX_DIM],
    u: f64,
    du: f64,
) -> DensityEval {
    let g2: f64 = grad.iter().map(|g| g * g).sum();
    let mut d_grad = [0.0; MAX_DIM];
    for (d, g) in d_grad.iter_mut().zip(grad) {
        *d = -tau * g;
    }
    DensityEval {
        value: 0.5 * rho0 * nu * nu - 0.5 * tau * g2 - u,
        d_phi: -du,
        d_nu: rho0 * nu,
        d_grad,
    }
}

/// Max relative error between the analytic partials and central differences
/// of the value, at one point.
pub fn fd_check_at(
    spec: &DensitySpec,
    x: &[f64; MAX_DIM],
    phi: f64,
    nu: f64,
    grad: &[f64; MAX_DIM],
    eps: f64,
) -> f64 {
    let value =
        |phi: f64, nu: f64, grad: &[f64; MAX_DIM]| eval_density(spec, x, phi, nu, grad).value;
    let at = eval_density(spec, x, phi, nu, grad);
    let rel = |analytic: f64, fd: f64| (analytic - fd).abs() / analytic.abs().max(1.0);

    let fd_phi = (value(phi + eps, nu, grad) - value(phi - eps, nu, grad)) / (2.0 * eps);
    let fd_nu = (value(phi, nu + eps, grad) - value(phi, nu - eps, grad)) / (2.0 * eps);
    let mut worst = rel(at.d_phi, fd_phi).max(rel(at.d_nu, fd_nu));
    for a in 0..MAX_DIM {
        let mut hi = *grad;
        let mut lo = *grad;
        hi[a] += eps;
        lo[a] -= eps;
        let fd_g = (value(phi, nu, &hi) - value(phi, nu, &lo)) / (2.0 * eps);
        worst = worst.max(rel(at.d_grad[a], fd_g));
    }
    worst
}

/// [`fd_check_at`] with a guard on the step size.
pub fn fd_check(
    spec: &DensitySpec,
    x: &[f64; MAX_DIM],
    phi: f64,
    nu: f64,
    grad: &[f64; MAX_DIM],
    eps: f64,
) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step {eps} not in (0, 1e-3]"
        )));
    }
    Ok(fd_check_at(spec, x, phi, nu, grad, eps))
}

/// External body and boundary forces, possibly time dependent.
///
/// Both closures must be pure: calling them concurrently with identical
/// arguments must yield identical results.
#[derive(Clone)]
pub struct ForceModel {
    pub body: Arc<dyn Fn(f64, &ScalarField, &ScalarField) -> ScalarField + Send + Sync>,
    pub boundary: Arc<dyn Fn(f64, &ScalarField, &ScalarField) -> BoundaryField + Send + Sync>,
}

impl fmt::Debug for ForceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ForceModel {{ .. }}")
    }
}

impl ForceModel {
    /// The unforced model.
    pub fn zero(grid: &Grid) -> Self {
        let g1 = grid.clone();
        let g2 = grid.clone();
        ForceModel {
            body: Arc::new(move |_, _, _| ScalarField::zeros(&g1)),
            boundary: Arc::new(move |_, _, _| BoundaryField::zeros(&g2)),
        }
    }

    /// Constant-in-time-and-state forces.
    pub fn constant(body: ScalarField, boundary: BoundaryField) -> Self {
        ForceModel {
            body: Arc::new(move |_, _, _| body.clone()),
            boundary: Arc::new(move |_, _, _| boundary.clone()),
        }
    }
}

/// A density together with a linear term representing folded-in constant
/// forces: the associated Lagrangian is the density integral plus the
/// pairing of `(body, boundary)` with the field. Its field-functional
/// derivative gains exactly `(body, boundary)`.
#[derive(Debug, Clone)]
pub struct FoldedDensity {
    pub base: DensitySpec,
    pub linear_body: ScalarField,
    pub linear_boundary: BoundaryField,
}

/// Fold constant forces into the Lagrangian. Running the folded density
/// without forces reproduces the forced run with the original density.
pub fn constant_force_fold(
    grid: &Grid,
    spec: &DensitySpec,
    body: &ScalarField,
    boundary: &BoundaryField,
) -> Result<FoldedDensity> {
    if body.len() != grid.len() || boundary.len() != grid.boundary().len() {
        return Err(Error::ShapeMismatch(
            "folded force fields do not match the grid".into(),
        ));
    }
    Ok(FoldedDensity {
        base: spec.clone(),
        linear_body: body.clone(),
        linear_boundary: boundary.clone(),
    })
}
