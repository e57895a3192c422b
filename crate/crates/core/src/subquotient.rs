//! Subquotients `sub / quo` of Z^n and homomorphisms between them.
//!
//! Homology groups, spectral sequence pages and derived limits are all stored
//! this way: elements are concrete integer vectors in an ambient coordinate
//! system, which keeps every induced map computable by substitution.

use std::sync::OnceLock;

use crate::group::{AbMap, FgAbGroup};
use crate::lattice::{apply_columns, preimage, Lattice};
use crate::matrix::IntMatrix;
use crate::sparse::SparseVec;

#[derive(Clone, Debug)]
pub struct Subquotient {
    sub: Lattice,
    quo: Lattice,
    group: OnceLock<FgAbGroup>,
}

impl Subquotient {
    /// `quo` must be contained in `sub`.
    pub fn new(sub: Lattice, quo: Lattice) -> Subquotient {
        debug_assert!(sub.includes(&quo), "quotient lattice must lie in the sub lattice");
        Subquotient { sub, quo, group: OnceLock::new() }
    }

    pub fn zero(dim: usize) -> Subquotient {
        Subquotient::new(Lattice::zero(dim), Lattice::zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.sub.dim()
    }

    pub fn sub(&self) -> &Lattice {
        &self.sub
    }

    pub fn quo(&self) -> &Lattice {
        &self.quo
    }

    /// Generators are the sub basis; relators are the quo basis in those coordinates.
    pub fn to_group(&self) -> &FgAbGroup {
        self.group.get_or_init(|| {
            let relators: Vec<SparseVec> =
                self.quo.basis().iter().map(|q| self.coords(q).expect("quo ⊆ sub")).collect();
            FgAbGroup::from_relators(self.sub.rank(), &relators)
        })
    }

    /// Coordinates of an ambient vector in the group presentation, if it lies in `sub`.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        self.sub.coordinates(v).map(|c| SparseVec::from_dense(&c))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.sub.contains(v)
    }

    pub fn is_zero_element(&self, v: &SparseVec) -> bool {
        self.quo.contains(v)
    }

    pub fn generators(&self) -> &[SparseVec] {
        self.sub.basis()
    }

    /// Ambient representative of a group element given in generator coordinates.
    pub fn lift(&self, coords: &SparseVec) -> SparseVec {
        apply_columns(self.sub.basis(), coords)
    }

    pub fn is_trivial(&self) -> bool {
        self.sub == self.quo
    }

    /// The homomorphism to `target` sending generator `k` to ambient vector `images[k]`.
    pub fn abmap_to(&self, target: &Subquotient, images: &[SparseVec]) -> AbMap {
        let cols: Vec<SparseVec> = images
            .iter()
            .map(|v| target.coords(v).expect("image lies in the target sub lattice"))
            .collect();
        let tg = target.to_group();
        AbMap::new(self.to_group().clone(), tg.clone(), IntMatrix::from_columns(tg.generators(), &cols))
            .expect("induced map is well defined")
    }
}

/// `{x ∈ source.sub : f(x) ∈ target.quo} + source.quo`, where `images` are the
/// ambient images of the source generators.
pub fn kernel_lattice(source: &Subquotient, target: &Subquotient, images: &[SparseVec]) -> Lattice {
    let coeffs = preimage(images, target.quo());
    source
        .quo()
        .add_generators(coeffs.basis().iter().map(|c| apply_columns(source.generators(), c)))
}

/// `span(images) + target.quo`.
pub fn image_lattice(target: &Subquotient, images: &[SparseVec]) -> Lattice {
    target.quo().add_generators(images.iter().cloned())
}

/// Exactness at `mid` of `… --in--> mid --out--> next`, with `incoming` the ambient
/// images of the previous generators and `outgoing` the images of the generators of `mid`.
pub fn exact_at(mid: &Subquotient, incoming: &[SparseVec], next: &Subquotient, outgoing: &[SparseVec]) -> bool {
    image_lattice(mid, incoming) == kernel_lattice(mid, next, outgoing)
}

/// Images of the generators of `source` under an ambient linear map given by columns.
pub fn images_under(source: &Subquotient, cols: &[SparseVec]) -> Vec<SparseVec> {
    source.generators().iter().map(|g| apply_columns(cols, g)).collect()
}

/// Cohomology-style subquotient `ker / (im + relations)` of an ambient differential.
///
/// `outgoing` has one column per ambient coordinate of this term, mapping into
/// `next_relations`'s ambient space; `incoming` are the ambient images of the
/// previous term's coordinates.
pub fn homology_subquotient(
    dim: usize,
    relations: &Lattice,
    outgoing: &[SparseVec],
    next_relations: &Lattice,
    incoming: &[SparseVec],
) -> Subquotient {
    debug_assert_eq!(outgoing.len(), dim);
    let cycles = preimage(outgoing, next_relations);
    let boundaries = relations.add_generators(incoming.iter().cloned());
    Subquotient::new(cycles, boundaries)
}

/// Checks that `image_lattice` of the composite of two ambient maps vanishes modulo `relations`.
pub fn composite_vanishes(first: &[SparseVec], second: &[SparseVec], relations: &Lattice) -> bool {
    first.iter().all(|c| relations.contains(&apply_columns(second, c)))
}
