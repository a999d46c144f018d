//! Pairing-preserving embedding of the working basis into the K3 lattice.
//!
//! `h` maps to `e1 + 2f1` (square 4) in the first hyperbolic block; each
//! `v_j` maps to a root of square -2 inside the two `E8(-1)` blocks, the
//! images mutually orthogonal. Roots are found by a brute-force census
//! over the coordinate box `{-1,0,1}^8` in the Bourbaki basis, then a
//! deterministic backtracking search picks an orthogonal family. The box
//! holds 44 roots up to sign and a maximal orthogonal family of five per
//! block (orthogonality does not force disjoint supports: for instance
//! `a1+a3` is orthogonal to `a3+a4`), so the two blocks together support
//! up to ten images -- exactly the node bound.

use crate::hodge::WorkingBasis;
use crate::lattice::{build_k3_lattice, e8_gram, LatticeModel, LatticeVector};
use crate::linalg::QMat;
use crate::rat::{rat_i, Rat};
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbedError {
    #[error(
        "unsupported rank: {requested} mutually orthogonal root images requested, \
         the bounded search provides at most {available}"
    )]
    UnsupportedRank { requested: usize, available: usize },
}

/// Coordinate radius of the root census.
const SEARCH_RADIUS: i64 = 1;

/// A pairing-preserving linear map from a working basis into the K3 lattice.
#[derive(Debug, Clone)]
pub struct K3Embedding {
    source_dim: usize,
    target: Arc<LatticeModel>,
    /// 22 x (1+s) matrix whose columns are the images of `h, v_1, ..., v_s`.
    map: QMat,
}

impl K3Embedding {
    pub fn target(&self) -> &Arc<LatticeModel> {
        &self.target
    }

    pub fn map(&self) -> &QMat {
        &self.map
    }

    /// Image of the `i`-th working-basis vector (0 = `h`, then `v_j`).
    pub fn image(&self, i: usize) -> LatticeVector {
        let coords = (0..self.target.dim())
            .map(|r| self.map.get(r, i).clone())
            .collect();
        self.target
            .vector(coords)
            .expect("embedding columns have ambient length")
    }

    /// Gram matrix of the images, `M^T G M`; equals the working-basis Gram
    /// `diag(4, -2, ..., -2)` by construction.
    pub fn image_gram(&self) -> QMat {
        let g = self.target.gram().to_qmat();
        self.map
            .transpose()
            .mul(&g)
            .and_then(|tg| tg.mul(&self.map))
            .expect("embedding dimensions agree")
    }

    /// Applies the embedding to working-basis coordinates.
    pub fn apply(&self, coords: &[Rat]) -> LatticeVector {
        assert_eq!(coords.len(), self.source_dim, "coordinate length mismatch");
        let mut out = vec![Rat::from_integer(0.into()); self.target.dim()];
        for (c, x) in coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                *o += x * self.map.get(r, c);
            }
        }
        self.target
            .vector(out)
            .expect("image coordinates have ambient length")
    }
}

/// All vectors `v` in the coordinate box `[-radius, radius]^8` with
/// `v^T C v = 2` for the E8 Cartan matrix `C`, deduplicated up to sign
/// (first nonzero coordinate positive) and sorted lexicographically.
fn e8_root_census(radius: i64) -> Vec<[i64; 8]> {
    let cartan = e8_gram(false);
    let c: Vec<Vec<i64>> = (0..8)
        .map(|i| {
            (0..8)
                .map(|j| i64::try_from(cartan.entry(i, j).clone()).expect("small entry"))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut v = [0i64; 8];
    fn rec(
        v: &mut [i64; 8],
        pos: usize,
        radius: i64,
        c: &[Vec<i64>],
        out: &mut Vec<[i64; 8]>,
    ) {
        if pos == 8 {
            let q: i64 = (0..8)
                .map(|i| (0..8).map(|j| v[i] * c[i][j] * v[j]).sum::<i64>())
                .sum();
            if q == 2 {
                let first = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
                if first > 0 {
                    out.push(*v);
                }
            }
            return;
        }
        for x in -radius..=radius {
            v[pos] = x;
            rec(v, pos + 1, radius, c, out);
        }
        v[pos] = 0;
    }
    rec(&mut v, 0, radius, &c, &mut out);
    out.sort();
    out
}

fn cartan_pairing(c: &[Vec<i64>], a: &[i64; 8], b: &[i64; 8]) -> i64 {
    (0..8)
        .map(|i| (0..8).map(|j| a[i] * c[i][j] * b[j]).sum::<i64>())
        .sum()
}

/// Deterministic depth-first search for `target` mutually orthogonal
/// vectors among the census, in lexicographic order.
fn orthogonal_family(census: &[[i64; 8]], target: usize) -> Option<Vec<[i64; 8]>> {
    if target > 8 {
        // Orthogonal vectors of nonzero square are independent; rank 8 caps
        // the family size.
        return None;
    }
    let cartan = e8_gram(false);
    let c: Vec<Vec<i64>> = (0..8)
        .map(|i| {
            (0..8)
                .map(|j| i64::try_from(cartan.entry(i, j).clone()).expect("small entry"))
                .collect()
        })
        .collect();
    fn rec(
        census: &[[i64; 8]],
        c: &[Vec<i64>],
        start: usize,
        chosen: &mut Vec<[i64; 8]>,
        target: usize,
    ) -> bool {
        if chosen.len() == target {
            return true;
        }
        for i in start..census.len() {
            let cand = census[i];
            if chosen.iter().all(|p| cartan_pairing(c, p, &cand) == 0) {
                chosen.push(cand);
                if rec(census, c, i + 1, chosen, target) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    if rec(census, &c, 0, &mut chosen, target) {
        Some(chosen)
    } else {
        None
    }
}

/// Largest orthogonal family size the bounded census supports per block.
fn max_family_size(census: &[[i64; 8]]) -> usize {
    let mut best = 0;
    for t in (1..=8).rev() {
        if orthogonal_family(census, t).is_some() {
            best = t;
            break;
        }
    }
    best
}

/// Builds an injective pairing-preserving map from the working basis into
/// the K3 lattice. The images of the `v_j` alternate between the two
/// `E8(-1)` blocks, so up to twice the per-block family size is available.
pub fn embed_in_k3(basis: &WorkingBasis) -> Result<K3Embedding, EmbedError> {
    let s = basis.s();
    let census = e8_root_census(SEARCH_RADIUS);
    let per_block_needed = s.div_ceil(2);
    let family = orthogonal_family(&census, per_block_needed).ok_or_else(|| {
        EmbedError::UnsupportedRank {
            requested: s,
            available: 2 * max_family_size(&census),
        }
    })?;
    let target = build_k3_lattice();
    let dim = target.dim();
    let mut map = QMat::zeros(dim, 1 + s);
    // h -> e1 + 2 f1: square 2*(1*2) = 4.
    map.set(0, 0, rat_i(1));
    map.set(1, 0, rat_i(2));
    // Blocks: U^3 occupies rows 0..6, the E8(-1) copies rows 6..14, 14..22.
    for j in 1..=s {
        let root = family[(j - 1) / 2];
        let block_off = if (j - 1) % 2 == 0 { 6 } else { 14 };
        for (r, &x) in root.iter().enumerate() {
            map.set(block_off + r, j, rat_i(x));
        }
    }
    Ok(K3Embedding {
        source_dim: 1 + s,
        target,
        map,
    })
}
