//! The reference partition of the unit cube `[-1/2, 1/2]^3`.
//!
//! Lattice points have coordinates `i / (2p)` with integer `i` in `[-p, p]`
//! per axis. They are numbered from 1 to `(2p+1)^3` face by face along
//! `x1`, then row by row along `x2`, then along `x3`. Each octant cube is
//! split into `p^3` small cubes and every small cube into six Kuhn
//! tetrahedra sharing the octant's main diagonal direction, which gives
//! `48 p^3` tetrahedra of equal volume.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Integer lattice point of the reference cube, in steps of `1/(2p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeIndex(pub [i32; 3]);

/// 1-based structured vertex number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexNumber(pub u64);

impl LatticeIndex {
    pub fn new(i1: i32, i2: i32, i3: i32) -> Self {
        LatticeIndex([i1, i2, i3])
    }

    pub fn is_valid(&self, p: u32) -> bool {
        self.0.iter().all(|&i| i.unsigned_abs() <= p)
    }

    /// Shell index: the largest absolute component.
    pub fn shell(&self) -> u32 {
        self.0.iter().map(|i| i.unsigned_abs()).max().unwrap_or(0)
    }
}

/// Octant sign pattern `μ`, bit `μ_j = 1` meaning `x_j ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Octant([u8; 3]);

impl Octant {
    /// The model octant `ν = (1,1,1)`.
    pub const NU: Octant = Octant([1, 1, 1]);

    pub fn new(mu: [u8; 3]) -> Result<Self> {
        if mu.iter().any(|&b| b > 1) {
            return Err(Error::invalid(format!("octant bits must be 0 or 1, got {mu:?}")));
        }
        Ok(Octant(mu))
    }

    pub fn bits(&self) -> [u8; 3] {
        self.0
    }

    /// `σ_j = 2μ_j − 1`.
    pub fn sign(&self, axis: usize) -> i32 {
        2 * self.0[axis] as i32 - 1
    }

    pub fn signs(&self) -> [i32; 3] {
        [self.sign(0), self.sign(1), self.sign(2)]
    }

    /// Position in `0..8`, `4μ1 + 2μ2 + μ3`.
    pub fn ordinal(&self) -> usize {
        4 * self.0[0] as usize + 2 * self.0[1] as usize + self.0[2] as usize
    }

    pub fn from_ordinal(ord: usize) -> Self {
        debug_assert!(ord < 8);
        Octant([(ord >> 2 & 1) as u8, (ord >> 1 & 1) as u8, (ord & 1) as u8])
    }

    pub fn all() -> impl Iterator<Item = Octant> {
        (0..8).map(Octant::from_ordinal)
    }

    pub(crate) fn flipped(&self, axis: usize) -> Self {
        let mut mu = self.0;
        mu[axis] ^= 1;
        Octant(mu)
    }
}

impl fmt::Display for Octant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A set of octants, stored as an 8-bit mask over [`Octant::ordinal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OctantSet(u8);

impl OctantSet {
    pub const ALL: OctantSet = OctantSet(0xff);
    pub const NU: OctantSet = OctantSet(1 << 7);

    pub fn single(octant: Octant) -> Self {
        OctantSet(1 << octant.ordinal())
    }

    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask == 0 {
            return Err(Error::invalid("octant set must not be empty"));
        }
        Ok(OctantSet(mask))
    }

    pub fn mask(&self) -> u8 {
        self.0
    }

    pub fn contains(&self, octant: Octant) -> bool {
        self.0 & (1 << octant.ordinal()) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_all(&self) -> bool {
        self.0 == 0xff
    }

    pub fn iter(&self) -> impl Iterator<Item = Octant> + '_ {
        Octant::all().filter(move |o| self.contains(*o))
    }

    /// Whether the closed cube of some selected octant contains `idx`.
    pub fn covers(&self, idx: LatticeIndex) -> bool {
        self.iter()
            .any(|o| (0..3).all(|j| idx.0[j] == 0 || (idx.0[j] > 0) == (o.0[j] == 1)))
    }
}

impl fmt::Display for OctantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_all() {
            f.write_str("all")
        } else if *self == OctantSet::NU {
            f.write_str("nu")
        } else {
            write!(f, "mask {:#04x}", self.0)
        }
    }
}

/// Permutation `α` of the three axes, stored 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation([u8; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2]);

    /// All six permutations in lexicographic order.
    pub const ALL: [Permutation; 6] = [
        Permutation([0, 1, 2]),
        Permutation([0, 2, 1]),
        Permutation([1, 0, 2]),
        Permutation([1, 2, 0]),
        Permutation([2, 0, 1]),
        Permutation([2, 1, 0]),
    ];

    /// Build from 0-based axis indices.
    pub fn new(axes: [u8; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &a in &axes {
            if a > 2 || seen[a as usize] {
                return Err(Error::invalid(format!("not a permutation of (0,1,2): {axes:?}")));
            }
            seen[a as usize] = true;
        }
        Ok(Permutation(axes))
    }

    /// Build from the 1-based notation `(α1, α2, α3)`.
    pub fn one_based(a1: u8, a2: u8, a3: u8) -> Result<Self> {
        if [a1, a2, a3].contains(&0) {
            return Err(Error::invalid("1-based permutation entries must be >= 1"));
        }
        Self::new([a1 - 1, a2 - 1, a3 - 1])
    }

    #[inline]
    pub fn axis(&self, j: usize) -> usize {
        self.0[j] as usize
    }

    pub fn axes(&self) -> [usize; 3] {
        [self.axis(0), self.axis(1), self.axis(2)]
    }

    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut s = self.0;
        s.swap(a, b);
        Permutation(s)
    }

    /// Index in [`Permutation::ALL`].
    pub fn ordinal(&self) -> usize {
        Self::ALL.iter().position(|q| q == self).unwrap()
    }

    /// The 1-based digits as a single integer, e.g. `231`.
    pub fn code(&self) -> u32 {
        100 * (self.0[0] as u32 + 1) + 10 * (self.0[1] as u32 + 1) + self.0[2] as u32 + 1
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0] + 1, self.0[1] + 1, self.0[2] + 1)
    }
}

/// A vertex located by octant, macro-tetrahedron and shell coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub octant: Octant,
    pub perm: Permutation,
    /// Shell index.
    pub l: u32,
    pub m: u32,
    pub n: u32,
}

impl Decomposition {
    pub fn is_valid(&self, p: u32) -> bool {
        self.n <= self.m && self.m <= self.l && self.l <= p
    }

    /// Signed lattice index reconstructed from the decomposition.
    pub fn lattice_index(&self) -> LatticeIndex {
        let lmn = [self.l as i32, self.m as i32, self.n as i32];
        let mut idx = [0i32; 3];
        for (j, &mag) in lmn.iter().enumerate() {
            let axis = self.perm.axis(j);
            idx[axis] = self.octant.sign(axis) * mag;
        }
        LatticeIndex(idx)
    }
}

fn check_p(p: u32) -> Result<()> {
    if p == 0 {
        return Err(Error::invalid("refinement parameter p must be >= 1"));
    }
    Ok(())
}

/// `(2p+1)^3`
pub fn vertex_count(p: u32) -> u64 {
    let side = 2 * p as u64 + 1;
    side * side * side
}

pub fn number_from_index(idx: LatticeIndex, p: u32) -> Result<VertexNumber> {
    check_p(p)?;
    if !idx.is_valid(p) {
        return Err(Error::invalid(format!(
            "lattice index {:?} outside [-{p}, {p}]",
            idx.0
        )));
    }
    let side = 2 * p as u64 + 1;
    // k_j - 1 = i_j + p
    let digit = |j: usize| (idx.0[j] as i64 + p as i64) as u64;
    Ok(VertexNumber(digit(0) * side * side + digit(1) * side + digit(2) + 1))
}

/// The per-axis digits `k_j ∈ [1, 2p+1]` of a structured number.
fn digits(k: VertexNumber, p: u32) -> Result<[u64; 3]> {
    check_p(p)?;
    if k.0 < 1 || k.0 > vertex_count(p) {
        return Err(Error::invalid(format!(
            "vertex number {} outside [1, {}]",
            k.0,
            vertex_count(p)
        )));
    }
    let side = 2 * p as u64 + 1;
    let r = k.0 - 1;
    Ok([r / (side * side) + 1, (r / side) % side + 1, r % side + 1])
}

pub fn index_from_number(k: VertexNumber, p: u32) -> Result<LatticeIndex> {
    let kd = digits(k, p)?;
    let i = |j: usize| kd[j] as i32 - p as i32 - 1;
    Ok(LatticeIndex([i(0), i(1), i(2)]))
}

/// Ordering of the axes by descending magnitude, ties by ascending axis.
fn descending_order(mag: [u32; 3]) -> Permutation {
    let mut axes = [0u8, 1, 2];
    axes.sort_by(|&a, &b| mag[b as usize].cmp(&mag[a as usize]).then(a.cmp(&b)));
    Permutation(axes)
}

pub fn decompose(k: VertexNumber, p: u32) -> Result<Decomposition> {
    let kd = digits(k, p)?;
    let p1 = p as u64 + 1;
    let mut mu = [0u8; 3];
    let mut mag = [0u32; 3];
    for j in 0..3 {
        // floor(k_j / (p+1)) is 0 on the negative side and 1 from the plane i_j = 0 on
        mu[j] = (kd[j] / p1) as u8;
        mag[j] = (kd[j] as i64 - p1 as i64).unsigned_abs() as u32;
    }
    let perm = descending_order(mag);
    Ok(Decomposition {
        octant: Octant(mu),
        perm,
        l: mag[perm.axis(0)],
        m: mag[perm.axis(1)],
        n: mag[perm.axis(2)],
    })
}

/// The decomposition of a lattice index, with the same conventions as
/// [`decompose`].
pub fn decompose_index(idx: LatticeIndex) -> Decomposition {
    let mut mu = [0u8; 3];
    let mut mag = [0u32; 3];
    for j in 0..3 {
        mu[j] = u8::from(idx.0[j] >= 0);
        mag[j] = idx.0[j].unsigned_abs();
    }
    let perm = descending_order(mag);
    Decomposition {
        octant: Octant(mu),
        perm,
        l: mag[perm.axis(0)],
        m: mag[perm.axis(1)],
        n: mag[perm.axis(2)],
    }
}

/// Every decomposition naming `idx`: all axis orderings consistent with
/// ties in magnitude, and both signs on zero components.
pub fn valid_decompositions(idx: LatticeIndex) -> Vec<Decomposition> {
    let mag = idx.0.map(|i| i.unsigned_abs());
    let mut out = Vec::new();
    for perm in Permutation::ALL {
        let (a, b, c) = (perm.axis(0), perm.axis(1), perm.axis(2));
        if !(mag[a] >= mag[b] && mag[b] >= mag[c]) {
            continue;
        }
        for ord in 0..8 {
            let oct = Octant::from_ordinal(ord);
            let consistent =
                (0..3).all(|j| idx.0[j] == 0 || (idx.0[j] > 0) == (oct.0[j] == 1));
            if consistent {
                out.push(Decomposition { octant: oct, perm, l: mag[a], m: mag[b], n: mag[c] });
            }
        }
    }
    out
}

/// Reference-cube coordinates of a decomposed vertex.
pub fn lattice_coords(dec: &Decomposition, p: u32) -> Result<[f64; 3]> {
    check_p(p)?;
    if !dec.is_valid(p) {
        return Err(Error::invalid(format!(
            "decomposition (l,m,n)=({},{},{}) invalid for p={p}",
            dec.l, dec.m, dec.n
        )));
    }
    let lmn = [dec.l, dec.m, dec.n];
    let two_p = 2.0 * p as f64;
    let mut x = [0.0; 3];
    for j in 0..3 {
        let axis = dec.perm.axis(j);
        let parity = if dec.octant.0[axis] == 1 { -1.0 } else { 1.0 };
        x[axis] = parity * (-(lmn[j] as f64)) / two_p;
    }
    Ok(x)
}

/// One tetrahedron of the reference cube partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeTet {
    pub vertices: [VertexNumber; 4],
    pub octant: Octant,
    /// The macro-tetrahedron `T_{μα}` containing this element.
    pub macro_tet: Permutation,
}

/// Six times the signed volume, in lattice units (`±1` for a Kuhn tetrahedron).
fn lattice_det(w: &[[i32; 3]; 4]) -> i64 {
    let e = |a: usize| {
        [
            (w[a][0] - w[0][0]) as i64,
            (w[a][1] - w[0][1]) as i64,
            (w[a][2] - w[0][2]) as i64,
        ]
    };
    let (a, b, c) = (e(1), e(2), e(3));
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Kuhn tetrahedra of the selected octants, positively oriented.
///
/// Order: octants by ordinal, small cubes lexicographically in octant-local
/// coordinates, then permutations in lexicographic order.
pub fn cube_connectivity(p: u32, octants: OctantSet) -> Result<Vec<CubeTet>> {
    check_p(p)?;
    if octants.is_empty() {
        return Err(Error::invalid("octant set must not be empty"));
    }
    let pi = p as i32;
    let mut tets = Vec::with_capacity(6 * (p as usize).pow(3) * octants.len());
    for oct in octants.iter() {
        let sigma = oct.signs();
        for q0 in 0..pi {
            for q1 in 0..pi {
                for q2 in 0..pi {
                    let q = [q0, q1, q2];
                    for perm in Permutation::ALL {
                        let mut local = [q; 4];
                        for s in 0..3 {
                            local[s + 1] = local[s];
                            local[s + 1][perm.axis(s)] += 1;
                        }
                        let mut global = local.map(|w| [sigma[0] * w[0], sigma[1] * w[1], sigma[2] * w[2]]);
                        if lattice_det(&global) < 0 {
                            global.swap(2, 3);
                        }
                        let vertices = global.map(|g| {
                            number_from_index(LatticeIndex(g), p).expect("lattice point in range")
                        });
                        tets.push(CubeTet { vertices, octant: oct, macro_tet: macro_label(q, perm) });
                    }
                }
            }
        }
    }
    Ok(tets)
}

/// Axis ordering of a Kuhn tetrahedron's interior: by small-cube corner
/// descending, ties resolved by the order the Kuhn path visits the axes.
fn macro_label(q: [i32; 3], perm: Permutation) -> Permutation {
    let visit = |axis: u8| perm.0.iter().position(|&a| a == axis).unwrap();
    let mut axes = [0u8, 1, 2];
    axes.sort_by(|&a, &b| q[b as usize].cmp(&q[a as usize]).then(visit(a).cmp(&visit(b))));
    Permutation(axes)
}
