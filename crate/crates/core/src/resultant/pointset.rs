use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field_core::{make_field, Field, Space};
use crate::transform::{GridFn, Mode, Point};

/// A subset of `F_q^d` stored as sorted indices plus a membership bitmap.
#[derive(Clone, Debug)]
pub struct PointSet {
    space: Space,
    idx: Vec<usize>,
    bits: Vec<u64>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.idx == other.idx
    }
}

impl PointSet {
    pub fn new(space: &Space, mut idx: Vec<usize>) -> Result<PointSet> {
        idx.sort_unstable();
        idx.dedup();
        if let Some(&last) = idx.last() {
            if last >= space.size() {
                return Err(Error::DimensionMismatch(format!(
                    "index {last} outside grid of size {}",
                    space.size()
                )));
            }
        }
        let mut bits = vec![0u64; space.size().div_ceil(64)];
        for &i in &idx {
            bits[i / 64] |= 1 << (i % 64);
        }
        Ok(PointSet {
            space: space.clone(),
            idx,
            bits,
        })
    }

    pub fn from_vectors(space: &Space, vecs: &[Vec<u32>]) -> Result<PointSet> {
        let idx = vecs.iter().map(|v| space.encode(v)).collect::<Result<_>>()?;
        Self::new(space, idx)
    }

    pub fn empty(space: &Space) -> PointSet {
        Self::new(space, Vec::new()).unwrap()
    }

    pub fn full(space: &Space) -> PointSet {
        Self::new(space, (0..space.size()).collect()).unwrap()
    }

    pub fn singleton(space: &Space, i: usize) -> Result<PointSet> {
        Self::new(space, vec![i])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.space.size() && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn vectors(&self) -> Vec<Vec<u32>> {
        self.idx.iter().map(|&i| self.space.coords(i).to_vec()).collect()
    }

    /// `-E`; `Delta_2(E, -E)` is the difference form `{||x - y||}`.
    pub fn negated(&self) -> PointSet {
        Self::new(&self.space, self.idx.iter().map(|&i| self.space.neg(i)).collect()).unwrap()
    }

    pub fn translated(&self, v: usize) -> PointSet {
        Self::new(&self.space, self.idx.iter().map(|&i| self.space.add(i, v)).collect()).unwrap()
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch("sets on different grids".into()));
        }
        let mut idx = self.idx.clone();
        idx.extend_from_slice(&other.idx);
        Self::new(&self.space, idx)
    }

    pub fn indicator(&self, mode: Mode) -> GridFn<Point> {
        GridFn::indicator(&self.space, &self.idx, mode).unwrap()
    }
}

/// Uniform sample without replacement, reproducible from `seed`.
pub fn random_set(space: &Space, size: usize, seed: u64) -> Result<PointSet> {
    if size > space.size() {
        return Err(Error::SizeOutOfRange {
            size,
            max: space.size(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = sample(&mut rng, space.size(), size).into_vec();
    PointSet::new(space, idx)
}

/// `E_j = F_p^d` inside `F_{p^2}^d` for `j = 1..k`.
pub fn subfield_sets(p: u32, d: usize, k: usize) -> Result<Vec<PointSet>> {
    let field = make_field(p, 2).map_err(|e| match e {
        Error::NonPrime(_) | Error::EvenCharacteristic => {
            Error::UnsupportedField(format!("no quadratic extension construction for p = {p}"))
        }
        other => other,
    })?;
    let space = Space::new(&field, d)?;
    // the prime subfield is encoded as 0..p
    let idx: Vec<usize> = (0..space.size())
        .filter(|&i| space.coords(i).iter().all(|&c| c < p))
        .collect();
    let e = PointSet::new(&space, idx)?;
    Ok(vec![e; k])
}

/// `{(s, i s) : s in F_q}` with `i^2 = -1`.
pub fn isotropic_line(field: &Field, d: usize) -> Result<PointSet> {
    if d != 2 {
        return Err(Error::DimensionMismatch(format!(
            "isotropic line lives in dimension 2, not {d}"
        )));
    }
    let i = field
        .sqrt_minus_one()
        .ok_or(Error::MinusOneNotSquare(field.q()))?;
    let space = Space::new(field, 2)?;
    let idx = field
        .elements()
        .map(|s| space.encode(&[s, field.mul(i, s)]))
        .collect::<Result<_>>()?;
    PointSet::new(&space, idx)
}
