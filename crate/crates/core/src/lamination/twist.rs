//! Dehn twists as flip words.
//!
//! A curve is flipped down until it crosses exactly two edges once each. Its
//! neighbourhood is then an annulus made of two triangles, and flipping one
//! diagonal followed by swapping the two diagonal labels shears the annulus
//! by one step: a twist. Conjugating back by the shortening flips gives the
//! twist on the original triangulation.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::coords::{edge_weight, is_connected_curve, is_reduced, NormalCoords};
use super::triangulation::IdealTriangulation;
use super::word::{flip_edge, MappingWord, Move};
use crate::error::{Error, Result};

/// Search states visited before giving up on shortening a curve.
const SHORTENING_BUDGET: usize = 200_000;

/// Whether the annulus shear built below is the left-handed twist, the
/// convention used everywhere.
const SHEAR_IS_LEFT: bool = true;

/// The annulus move at a short curve, or `None` if `w` is not short.
fn annulus_shear(t: &IdealTriangulation, w: &[i64]) -> Option<MappingWord> {
    let support: Vec<usize> = (0..w.len()).filter(|&e| w[e] != 0).collect();
    if support.len() != 2 || support.iter().any(|&e| w[e] != 1) {
        return None;
    }
    let (e1, e2) = (support[0], support[1]);
    // A triangle (x, f, g) in counter-clockwise order with {f, g} = {e1, e2};
    // flipping g shears the annulus.
    let tri = t.triangles().iter().find(|tr| tr.contains(&e1) && tr.contains(&e2))?;
    let pos = tri.iter().position(|&x| x != e1 && x != e2)?;
    let g = tri[(pos + 2) % 3];
    let mut perm: Vec<usize> = (0..w.len()).collect();
    perm.swap(e1, e2);
    let shear = MappingWord::new(vec![Move::Flip(g), Move::Relabel(perm)]);
    (shear.validate(t).is_ok()).then_some(shear)
}

/// Left-handed Dehn twist about the connected, non-peripheral curve `curve`.
pub fn twist_word(t: &IdealTriangulation, curve: &NormalCoords) -> Result<MappingWord> {
    if curve.len() != t.num_edges() {
        return Err(Error::invalid("curve length does not match the triangulation"));
    }
    if curve.is_zero() || !is_reduced(t, curve) || !is_connected_curve(t, curve) {
        return Err(Error::invalid(format!("{curve} is not an essential non-peripheral curve")));
    }
    if curve.iter().all(|w| w % 2 == 0) {
        // Every arc crosses it evenly, so no flip sequence makes it short.
        return Err(Error::invalid(format!(
            "{curve} has all punctures on one side; its twist is not built by the annulus move"
        )));
    }
    // Best-first search over flip sequences, ordered by the curve's weight.
    type State = (IdealTriangulation, NormalCoords);
    let mut parent: HashMap<State, Option<(State, usize)>> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let start: State = (t.clone(), curve.clone());
    parent.insert(start.clone(), None);
    heap.push(Reverse((edge_weight(curve), 0usize, start)));
    while let Some(Reverse((_, depth, state))) = heap.pop() {
        if let Some(shear) = annulus_shear(&state.0, &state.1) {
            let mut path = Vec::new();
            let mut cur = state.clone();
            while let Some(Some((prev, e))) = parent.get(&cur) {
                path.push(*e);
                cur = prev.clone();
            }
            path.reverse();
            let core = if SHEAR_IS_LEFT { shear } else { shear.inverse() };
            let mut moves: Vec<Move> = path.iter().map(|&e| Move::Flip(e)).collect();
            moves.extend(core.moves().iter().cloned());
            moves.extend(path.iter().rev().map(|&e| Move::Flip(e)));
            let word = MappingWord::new(moves);
            word.validate(t)?;
            return Ok(word);
        }
        if parent.len() > SHORTENING_BUDGET {
            break;
        }
        for e in 0..state.0.num_edges() {
            if !state.0.is_flippable(e) {
                continue;
            }
            let next = flip_edge(&state.0, &state.1, e)?;
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((state.clone(), e)));
            heap.push(Reverse((edge_weight(&next.1), depth + 1, next)));
        }
    }
    Err(Error::Budget(format!("could not shorten curve {curve} within {SHORTENING_BUDGET} states")))
}
