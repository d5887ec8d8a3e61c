//! Geometry of a slice `S = S₊³ ∩ L`: maximal-rank element, the linear hull
//! of `S`, and an independent sampler of points of `S`.

mod facial;
mod sampler;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::Subspace;

pub use facial::{face_span, max_rank_element, max_rank_element_with, FacialOptions, MaxRankWitness};
pub use sampler::{sample_slice_points, sample_slice_points_with, SamplerOptions, SlicePoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceDescription {
    pub l: Subspace,
    /// Linear hull of the slice.
    pub span_s: Subspace,
    pub dim_s: usize,
    pub witness: MaxRankWitness,
}

impl SliceDescription {
    /// `true` when the slice meets the interior of the PSD cone.
    pub fn has_interior_point(&self) -> bool {
        self.witness.rank == 3
    }
}

pub fn slice_dimension(l: &Subspace) -> Result<SliceDescription> {
    slice_dimension_with(l, &FacialOptions::default())
}

/// A definite witness spans the whole of `L`; otherwise the hull is
/// `L ∩ {X : X = PXP}` with `P` the projector onto the witness range.
pub fn slice_dimension_with(l: &Subspace, opts: &FacialOptions) -> Result<SliceDescription> {
    let witness = max_rank_element_with(l, opts)?;
    let span_s = match witness.rank {
        3 => l.clone(),
        0 => Subspace::zero(),
        _ => {
            let hull = l.intersect(&face_span(&witness.range_basis));
            // snap back into L exactly
            Subspace::span(&hull.basis().iter().map(|b| l.project(b)).collect::<Vec<_>>())
        }
    };
    Ok(SliceDescription { l: l.clone(), dim_s: span_s.dim(), span_s, witness })
}
