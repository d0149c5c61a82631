//! Möbius maps, Schottky coordinates and the sewing-parameter region.

pub mod gauss;
pub mod moebius;
pub mod region;

pub use gauss::GaussRat;
pub use moebius::{fixed_points_multiplier, from_wzq, sqrt_approx, to_wzq, FixedPoints, MoebiusMap, Point};
pub use region::{
    certify_points, disks_disjoint, in_u_gr, plumbing_check, u_plus_ordered, PointCertificate, SchottkyGenerators,
};
