//! Casimir elements, Casimir endomorphisms and the subalgebra they generate.

pub mod casimir;
pub mod pv;
pub mod relation;

pub use casimir::{casimir_element, casimir_endo, casimir_endo_vacuum, dual_pairs, CasimirElement};
pub use pv::{
    even_part_partition_counts, flip_heisenberg, is_closed, orthogonal_complement, pv_filtration, pv_filtration_with,
    trace_orthogonality_check, zero_mode_trace, PVFiltration, PVPiece, TraceReport, DEFAULT_PV_BUDGET,
};
pub use relation::{
    closed_form_coefficient, descendant_norm_ratio, gamma_qp_relation_check, short_form_coefficient, GammaQpReport,
};
