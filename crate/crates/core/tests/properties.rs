mod common;

use common::props;

#[test]
fn classification_is_conjugation_invariant() {
    props::conjugation_invariance(10_000).unwrap();
}

#[test]
fn rho_of_the_standard_pair_is_l1() {
    props::l1_identity(10_000).unwrap();
}

#[test]
fn intersection_form_is_symmetric_bilinear_and_equivariant() {
    props::intersection_form(1_000).unwrap();
}

#[test]
fn farey_distance_is_an_equivariant_metric() {
    props::farey_axioms(1_000).unwrap();
}

#[test]
fn flips_are_involutions_preserving_validity() {
    props::flip_involution(1_000).unwrap();
}

#[test]
fn generators_are_homogeneous_valid_and_invertible() {
    props::generator_actions(300).unwrap();
}
