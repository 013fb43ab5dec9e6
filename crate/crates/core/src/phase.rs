//! The restricted cotangent bundle of the discrete field space, its
//! canonical one- and two-forms, the flat map, the Tulczyjew maps and the
//! canonical Dirac structure.
//!
//! A covector in the restricted dual is a pair of an interior density and a
//! boundary density; it acts on a field through the interior quadrature plus
//! the boundary quadrature of the trace. The bidual is identified with the
//! field space by reusing the same pairing with the roles swapped, so a
//! single [`pair`] function carries the whole module.

use crate::grid::{
    boundary_quadrature, quadrature, trace, BoundaryField, Grid, ScalarField,
};
use crate::Result;

/// An element of the restricted dual: an interior density plus a boundary
/// density.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedCovector {
    pub interior: ScalarField,
    pub boundary: BoundaryField,
}

impl RestrictedCovector {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            interior: ScalarField::zeros(grid),
            boundary: BoundaryField::zeros(grid),
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.interior.norm_inf().max(self.boundary.norm_inf())
    }

    pub fn is_finite(&self) -> bool {
        self.interior.is_finite() && self.boundary.is_finite()
    }

    pub fn add_scaled(&mut self, s: f64, other: &RestrictedCovector) {
        self.interior.add_scaled(s, &other.interior);
        self.boundary.add_scaled(s, &other.boundary);
    }

    pub fn scaled(&self, s: f64) -> RestrictedCovector {
        let mut out = self.clone();
        out.interior.values.iter_mut().for_each(|v| *v *= s);
        out.boundary.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn average(&self, other: &RestrictedCovector) -> RestrictedCovector {
        RestrictedCovector {
            interior: self.interior.average(&other.interior),
            boundary: self.boundary.average(&other.boundary),
        }
    }
}

/// A point of the restricted cotangent bundle: a field with its momentum
/// covector.
#[derive(Debug, Clone)]
pub struct PhasePoint {
    pub field: ScalarField,
    pub momentum: RestrictedCovector,
}

/// A tangent vector to the restricted cotangent bundle.
#[derive(Debug, Clone)]
pub struct PhaseTangent {
    pub d_field: ScalarField,
    pub d_momentum: RestrictedCovector,
}

impl PhaseTangent {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            d_field: ScalarField::zeros(grid),
            d_momentum: RestrictedCovector::zeros(grid),
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.d_field.norm_inf().max(self.d_momentum.norm_inf())
    }
}

/// A covector on the restricted cotangent bundle.
///
/// `with_d_field` pairs against the field component of a tangent;
/// `with_d_momentum` lives in the bidual, identified with the field space,
/// and pairs against the momentum component.
#[derive(Debug, Clone)]
pub struct PhaseCovector {
    pub with_d_field: RestrictedCovector,
    pub with_d_momentum: ScalarField,
}

impl PhaseCovector {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            with_d_field: RestrictedCovector::zeros(grid),
            with_d_momentum: ScalarField::zeros(grid),
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.with_d_field
            .norm_inf()
            .max(self.with_d_momentum.norm_inf())
    }
}

/// A point of the Pontryagin bundle: field, velocity and momentum.
#[derive(Debug, Clone)]
pub struct PontryaginPoint {
    pub field: ScalarField,
    pub velocity: ScalarField,
    pub momentum: RestrictedCovector,
}

impl PontryaginPoint {
    pub fn is_finite(&self) -> bool {
        self.field.is_finite() && self.velocity.is_finite() && self.momentum.is_finite()
    }
}

/// An element of the cotangent bundle of the tangent space: a base point
/// `(field, velocity)` with one covector slot per direction.
#[derive(Debug, Clone)]
pub struct TangentCovector {
    pub base_field: ScalarField,
    pub base_velocity: ScalarField,
    pub with_d_field: RestrictedCovector,
    pub with_d_velocity: RestrictedCovector,
}

/// Duality pairing of the restricted dual against a field:
/// interior quadrature plus boundary quadrature of the trace.
pub fn pair(grid: &Grid, c: &RestrictedCovector, f: &ScalarField) -> Result<f64> {
    let mut prod = f.clone();
    for (p, a) in prod.values.iter_mut().zip(&c.interior.values) {
        *p *= a;
    }
    let inner = quadrature(grid, &prod)?;
    let mut tr = trace(grid, f)?;
    for (t, b) in tr.values.iter_mut().zip(&c.boundary.values) {
        *t *= b;
    }
    Ok(inner + boundary_quadrature(grid, &tr)?)
}

/// Action of a phase covector on a phase tangent. The momentum slot reuses
/// [`pair`] with the roles swapped (the bidual identification).
pub fn pair_phase(grid: &Grid, c: &PhaseCovector, dz: &PhaseTangent) -> Result<f64> {
    Ok(pair(grid, &c.with_d_field, &dz.d_field)?
        + pair(grid, &dz.d_momentum, &c.with_d_momentum)?)
}

/// The canonical one-form: the momentum of the base point paired with the
/// field component of the tangent.
pub fn theta(grid: &Grid, z: &PhasePoint, dz: &PhaseTangent) -> Result<f64> {
    pair(grid, &z.momentum, &dz.d_field)
}

/// The canonical symplectic two-form,
/// `<dz2.d_momentum, dz1.d_field> - <dz1.d_momentum, dz2.d_field>`.
pub fn omega(grid: &Grid, _z: &PhasePoint, dz1: &PhaseTangent, dz2: &PhaseTangent) -> Result<f64> {
    Ok(pair(grid, &dz2.d_momentum, &dz1.d_field)?
        - pair(grid, &dz1.d_momentum, &dz2.d_field)?)
}

/// Flat map of the canonical two-form: `(df, dm) -> (-dm, df)`.
pub fn omega_flat(_grid: &Grid, _z: &PhasePoint, dz: &PhaseTangent) -> PhaseCovector {
    PhaseCovector {
        with_d_field: dz.d_momentum.scaled(-1.0),
        with_d_momentum: dz.d_field.clone(),
    }
}

/// Inverse of the flat map: `(c_f, c_m) -> (c_m, -c_f)`.
pub fn omega_flat_inverse(_grid: &Grid, _z: &PhasePoint, c: &PhaseCovector) -> PhaseTangent {
    PhaseTangent {
        d_field: c.with_d_momentum.clone(),
        d_momentum: c.with_d_field.scaled(-1.0),
    }
}

/// The index shuffle from tangents of the cotangent bundle to covectors of
/// the tangent bundle: momentum rate pairs with the field direction, the
/// momentum itself with the velocity direction.
pub fn kappa(z: &PhasePoint, dz: &PhaseTangent) -> TangentCovector {
    TangentCovector {
        base_field: z.field.clone(),
        base_velocity: dz.d_field.clone(),
        with_d_field: dz.d_momentum.clone(),
        with_d_velocity: z.momentum.clone(),
    }
}

/// Inverse of [`kappa`].
pub fn kappa_inverse(w: &TangentCovector) -> (PhasePoint, PhaseTangent) {
    (
        PhasePoint {
            field: w.base_field.clone(),
            momentum: w.with_d_velocity.clone(),
        },
        PhaseTangent {
            d_field: w.base_velocity.clone(),
            d_momentum: w.with_d_field.clone(),
        },
    )
}

/// The composite of the flat map with the inverse shuffle: maps a covector
/// on the tangent bundle to a phase covector over the base
/// `(field, with_d_velocity)`, flipping the sign of the field slot.
pub fn gamma(w: &TangentCovector) -> (PhasePoint, PhaseCovector) {
    (
        PhasePoint {
            field: w.base_field.clone(),
            momentum: w.with_d_velocity.clone(),
        },
        PhaseCovector {
            with_d_field: w.with_d_field.scaled(-1.0),
            with_d_momentum: w.base_velocity.clone(),
        },
    )
}

/// The symmetrized pairing on the Pontryagin bundle,
/// `<c1, dz2> + <c2, dz1>`. The canonical Dirac structure is exactly its
/// null space restricted against itself.
pub fn dirac_pairing(
    grid: &Grid,
    d1: (&PhaseTangent, &PhaseCovector),
    d2: (&PhaseTangent, &PhaseCovector),
) -> Result<f64> {
    Ok(pair_phase(grid, d1.1, d2.0)? + pair_phase(grid, d2.1, d1.0)?)
}

/// Graph membership in the canonical Dirac structure: the covector equals
/// the flat map of the tangent within `tol` times a scale floor.
pub fn dirac_contains(
    grid: &Grid,
    z: &PhasePoint,
    d: (&PhaseTangent, &PhaseCovector),
    tol: f64,
) -> bool {
    dirac_defect(grid, z, d) <= tol * dirac_scale(d)
}

/// Max-norm distance of `(dz, c)` from the graph of the flat map.
pub fn dirac_defect(grid: &Grid, z: &PhasePoint, d: (&PhaseTangent, &PhaseCovector)) -> f64 {
    let (dz, c) = d;
    let flat = omega_flat(grid, z, dz);
    let mut m: f64 = 0.0;
    for (a, b) in c
        .with_d_field
        .interior
        .values
        .iter()
        .zip(&flat.with_d_field.interior.values)
    {
        m = m.max((a - b).abs());
    }
    for (a, b) in c
        .with_d_field
        .boundary
        .values
        .iter()
        .zip(&flat.with_d_field.boundary.values)
    {
        m = m.max((a - b).abs());
    }
    for (a, b) in c
        .with_d_momentum
        .values
        .iter()
        .zip(&flat.with_d_momentum.values)
    {
        m = m.max((a - b).abs());
    }
    m
}

/// Scale floor for graph-membership tolerances: `max(1, inputs)` in the
/// max norm, so tolerances stay meaningful near zero fields.
pub fn dirac_scale(d: (&PhaseTangent, &PhaseCovector)) -> f64 {
    d.0.norm_inf().max(d.1.norm_inf()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn grid_1d(n: usize) -> Grid {
        make_grid(1, &[(0.0, 1.0)], &[n]).unwrap()
    }

    fn random_field(rng: &mut impl Rng, grid: &Grid) -> ScalarField {
        ScalarField {
            values: (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        }
    }

    fn random_boundary(rng: &mut impl Rng, grid: &Grid) -> BoundaryField {
        BoundaryField {
            values: (0..grid.boundary().len())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect(),
        }
    }

    fn random_covector(rng: &mut impl Rng, grid: &Grid) -> RestrictedCovector {
        RestrictedCovector {
            interior: random_field(rng, grid),
            boundary: random_boundary(rng, grid),
        }
    }

    fn random_tangent(rng: &mut impl Rng, grid: &Grid) -> PhaseTangent {
        PhaseTangent {
            d_field: random_field(rng, grid),
            d_momentum: random_covector(rng, grid),
        }
    }

    fn zero_point(grid: &Grid) -> PhasePoint {
        PhasePoint {
            field: ScalarField::zeros(grid),
            momentum: RestrictedCovector::zeros(grid),
        }
    }

    #[test]
    fn pairing_examples() {
        let g = grid_1d(21);
        // Unit densities against the unit field: measure of the box plus
        // measure of the boundary.
        let c = RestrictedCovector {
            interior: ScalarField::constant(&g, 1.0),
            boundary: BoundaryField::constant(&g, 1.0),
        };
        let one = ScalarField::constant(&g, 1.0);
        assert!((pair(&g, &c, &one).unwrap() - 3.0).abs() < 1e-13);

        // Zero covector annihilates everything.
        let z = RestrictedCovector::zeros(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_field(&mut rng, &g);
        assert_eq!(pair(&g, &z, &f).unwrap(), 0.0);

        // alpha(x) = x against phi(x) = x integrates x^2.
        let g = grid_1d(101);
        let c = RestrictedCovector {
            interior: ScalarField::from_fn(&g, |x| x[0]),
            boundary: BoundaryField::zeros(&g),
        };
        let f = ScalarField::from_fn(&g, |x| x[0]);
        assert!((pair(&g, &c, &f).unwrap() - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn theta_is_pairing_with_momentum() {
        let g = grid_1d(13);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = PhasePoint {
            field: random_field(&mut rng, &g),
            momentum: random_covector(&mut rng, &g),
        };
        let dz = random_tangent(&mut rng, &g);
        let th = theta(&g, &z, &dz).unwrap();
        assert_eq!(th, pair(&g, &z.momentum, &dz.d_field).unwrap());

        // Theta only sees the field direction.
        let mut dz0 = dz.clone();
        dz0.d_field = ScalarField::zeros(&g);
        assert_eq!(theta(&g, &z, &dz0).unwrap(), 0.0);

        // Unit momentum against a unit direction on [0,1] gives 3.
        let z1 = PhasePoint {
            field: ScalarField::zeros(&g),
            momentum: RestrictedCovector {
                interior: ScalarField::constant(&g, 1.0),
                boundary: BoundaryField::constant(&g, 1.0),
            },
        };
        let dz1 = PhaseTangent {
            d_field: ScalarField::constant(&g, 1.0),
            d_momentum: RestrictedCovector::zeros(&g),
        };
        assert!((theta(&g, &z1, &dz1).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn omega_antisymmetric_and_flat_compatible() {
        let g = grid_1d(11);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let z = zero_point(&g);
        for _ in 0..50 {
            let dz1 = random_tangent(&mut rng, &g);
            let dz2 = random_tangent(&mut rng, &g);
            let o12 = omega(&g, &z, &dz1, &dz2).unwrap();
            let o21 = omega(&g, &z, &dz2, &dz1).unwrap();
            let scale = o12.abs().max(1.0);
            assert!((o12 + o21).abs() <= 1e-12 * scale);
            assert_eq!(omega(&g, &z, &dz1, &dz1).unwrap(), 0.0);

            // <omega_flat(dz1), dz2> = omega(dz1, dz2).
            let c = omega_flat(&g, &z, &dz1);
            let lhs = pair_phase(&g, &c, &dz2).unwrap();
            assert!(
                (lhs - o12).abs() <= 1e-12 * scale,
                "flat defining property: {lhs} vs {o12}"
            );
        }
    }

    #[test]
    fn omega_example_value() {
        // dz1 = (df = 1, 0), dz2 = (0, dm = (1,1)) on [0,1] gives +3.
        let g = grid_1d(17);
        let z = zero_point(&g);
        let dz1 = PhaseTangent {
            d_field: ScalarField::constant(&g, 1.0),
            d_momentum: RestrictedCovector::zeros(&g),
        };
        let dz2 = PhaseTangent {
            d_field: ScalarField::zeros(&g),
            d_momentum: RestrictedCovector {
                interior: ScalarField::constant(&g, 1.0),
                boundary: BoundaryField::constant(&g, 1.0),
            },
        };
        assert!((omega(&g, &z, &dz1, &dz2).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn flat_map_reference_values_and_inverse() {
        let g = grid_1d(9);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let z = zero_point(&g);

        // (0, a, a_b) maps to ((-a, -a_b), 0).
        let a = random_covector(&mut rng, &g);
        let dz = PhaseTangent {
            d_field: ScalarField::zeros(&g),
            d_momentum: a.clone(),
        };
        let c = omega_flat(&g, &z, &dz);
        for (x, y) in c.with_d_field.interior.values.iter().zip(&a.interior.values) {
            assert_eq!(*x, -y);
        }
        for (x, y) in c.with_d_field.boundary.values.iter().zip(&a.boundary.values) {
            assert_eq!(*x, -y);
        }
        assert_eq!(c.with_d_momentum.norm_inf(), 0.0);

        // Round trip.
        for _ in 0..20 {
            let dz = random_tangent(&mut rng, &g);
            let back = omega_flat_inverse(&g, &z, &omega_flat(&g, &z, &dz));
            assert_eq!(back.d_field, dz.d_field);
            assert_eq!(back.d_momentum, dz.d_momentum);
        }
    }

    #[test]
    fn tulczyjew_triple_closes() {
        let g = grid_1d(8);
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..20 {
            let z = PhasePoint {
                field: random_field(&mut rng, &g),
                momentum: random_covector(&mut rng, &g),
            };
            let dz = random_tangent(&mut rng, &g);

            // gamma after kappa is the flat map.
            let (base, through) = gamma(&kappa(&z, &dz));
            let direct = omega_flat(&g, &z, &dz);
            assert_eq!(base.field, z.field);
            assert_eq!(base.momentum, z.momentum);
            assert_eq!(through.with_d_field, direct.with_d_field);
            assert_eq!(through.with_d_momentum, direct.with_d_momentum);

            // kappa round trips.
            let (z2, dz2) = kappa_inverse(&kappa(&z, &dz));
            assert_eq!(z2.field, z.field);
            assert_eq!(dz2.d_field, dz.d_field);
            assert_eq!(dz2.d_momentum, dz.d_momentum);
        }

        // Zero tangent: gamma output has zero covector slots.
        let z = zero_point(&g);
        let dz = PhaseTangent::zeros(&g);
        let (_, c) = gamma(&kappa(&z, &dz));
        assert_eq!(c.norm_inf(), 0.0);
    }

    #[test]
    fn dirac_graph_membership_and_isotropy() {
        let g = grid_1d(10);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let z = zero_point(&g);
        let tol = 1e-12;
        for _ in 0..50 {
            let dz1 = random_tangent(&mut rng, &g);
            let dz2 = random_tangent(&mut rng, &g);
            let c1 = omega_flat(&g, &z, &dz1);
            let c2 = omega_flat(&g, &z, &dz2);
            assert!(dirac_contains(&g, &z, (&dz1, &c1), tol));

            // The pairing vanishes on graph pairs; in particular on d1 = d2.
            let p = dirac_pairing(&g, (&dz1, &c1), (&dz2, &c2)).unwrap();
            let scale = dz1.norm_inf() * dz2.norm_inf();
            assert!(p.abs() <= 1e-12 * scale.max(1.0), "isotropy defect {p}");
            let p11 = dirac_pairing(&g, (&dz1, &c1), (&dz1, &c1)).unwrap();
            assert!(p11.abs() <= 1e-12 * dz1.norm_inf().powi(2).max(1.0));

            // A perturbation larger than the tolerance leaves the graph.
            let mut c_off = c1.clone();
            c_off.with_d_momentum.values[3] += 1e-6;
            assert!(!dirac_contains(&g, &z, (&dz1, &c_off), tol));
        }
    }
}
