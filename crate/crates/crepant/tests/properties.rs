//! One test per randomized property suite; the bodies live in
//! `common/mod.rs` so the acceptance target can drive the same suites.

mod common;

#[test]
fn ring_axioms_hold() {
    common::ring_axioms_hold();
}

#[test]
fn order_is_additive_under_multiplication() {
    common::order_is_additive_under_multiplication();
}

#[test]
fn twist_rescales_the_discriminant_by_twelve_k() {
    common::twist_rescales_the_discriminant_by_twelve_k();
}

#[test]
fn printing_then_parsing_is_the_identity() {
    common::printing_then_parsing_is_the_identity();
}

#[test]
fn squarefree_classes_recompose_exactly() {
    common::squarefree_classes_recompose_exactly();
}

#[test]
fn blow_up_charts_agree_on_the_overlap() {
    common::blow_up_charts_agree_on_the_overlap();
}

#[test]
fn kodaira_classification_is_total_on_the_grid() {
    common::kodaira_classification_is_total_on_the_grid();
}

#[test]
fn extremal_rows_all_have_rank_zero() {
    common::extremal_rows_all_have_rank_zero();
}

#[test]
fn resolutions_of_isolated_points_are_crepant() {
    common::resolutions_of_isolated_points_are_crepant();
}
