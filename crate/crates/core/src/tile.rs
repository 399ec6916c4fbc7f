//! Box tiles `Y = {1..n}^d x F` with translation lattice `Z = (nZ)^d x {0}`.

use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{expansion_ratio, mixed_radix, FiniteSubset, GroupElement, GroupSpec};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    group: GroupSpec,
    box_side: i64,
}

impl Tile {
    pub fn new(group: &GroupSpec, box_side: i64) -> Result<Self> {
        if box_side < 1 {
            return Err(Error::Domain(format!("box side {box_side} must be positive")));
        }
        Ok(Tile {
            group: group.clone(),
            box_side,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn box_side(&self) -> i64 {
        self.box_side
    }

    /// The full torsion factor is always part of the tile.
    pub fn includes_torsion(&self) -> bool {
        true
    }

    /// Stride of the translation lattice, equal to the box side.
    pub fn lattice_stride(&self) -> i64 {
        self.box_side
    }

    pub fn size(&self) -> i64 {
        self.box_side.pow(self.group.free_rank as u32) * self.group.torsion_order()
    }

    pub fn elements(&self) -> FiniteSubset {
        FiniteSubset::offset_box(&self.group, 1, self.box_side)
    }

    /// Splits `x` as `y + z` with `y` in the tile and `z` in the lattice.
    pub fn decompose(&self, x: &GroupElement) -> (GroupElement, GroupElement) {
        let n = self.box_side;
        let z_free: Vec<i64> = x.free.iter().map(|&c| (c - 1).div_euclid(n) * n).collect();
        let y_free: Vec<i64> = x.free.iter().zip(&z_free).map(|(c, z)| c - z).collect();
        (
            GroupElement {
                free: y_free,
                tors: x.tors.clone(),
            },
            GroupElement {
                free: z_free,
                tors: vec![0; x.tors.len()],
            },
        )
    }

    /// Counts, for every point of `[-r*n, r*n]^d x F`, how many lattice
    /// translates of the tile contain it, by enumerating translates that can
    /// reach the window. Returns the number of points whose count is not 1.
    pub fn cover_defects(&self, radius_in_sides: i64) -> usize {
        let n = self.box_side;
        let d = self.group.free_rank;
        let lo = -radius_in_sides * n;
        let width = 2 * radius_in_sides * n + 1;
        let tors_order = self.group.torsion_order() as usize;
        let points = (width as usize).pow(d as u32) * tors_order;
        let mut counts = vec![0u32; points];
        let tors_index = |t: &[i64]| -> usize {
            let mut idx = 0usize;
            for (r, m) in t.iter().zip(&self.group.torsion) {
                idx = idx * (*m as usize) + *r as usize;
            }
            idx
        };
        let tile = self.elements();
        // lattice points z = n*k with k in [-r-1, r]^d reach every window point
        let k_range = 2 * radius_in_sides + 2;
        for k in mixed_radix(&vec![k_range; d]) {
            let z: Vec<i64> = k.iter().map(|ki| (ki - radius_in_sides - 1) * n).collect();
            for y in tile.iter() {
                let mut idx = 0usize;
                let mut inside = true;
                for (yc, zc) in y.free.iter().zip(&z) {
                    let c = yc + zc - lo;
                    if c < 0 || c >= width {
                        inside = false;
                        break;
                    }
                    idx = idx * width as usize + c as usize;
                }
                if inside {
                    counts[idx * tors_order + tors_index(&y.tors)] += 1;
                }
            }
        }
        counts.iter().filter(|&&c| c != 1).count()
    }
}

/// Report produced by [`build_tile`].
#[derive(Debug, Clone, Serialize)]
pub struct TileReport {
    pub box_side: i64,
    pub tile_size: i64,
    #[serde(with = "crate::rational::serde_rational")]
    pub ratio: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub bound: Rational,
}

/// Smallest box tile `Y` with `((n+2m)/n)^d < 1 + eps`, where `m` bounds the
/// free coordinates of `B`. Then `|B + Y| / |Y| < 1 + eps`.
pub fn build_tile(b: &FiniteSubset, eps: &Rational) -> Result<Tile> {
    if *eps <= Rational::zero() {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let group = b.group();
    let d = group.free_rank as u32;
    if d == 0 {
        return Tile::new(group, 1);
    }
    let m = b.free_radius();
    let target = Rational::one() + eps;
    let ok = |n: i64| -> bool { box_bound(n, m, d) < target };
    let mut hi = 1i64;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2; // ok(lo) is false unless lo == 0
    if lo == 0 {
        return Tile::new(group, 1);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Tile::new(group, hi)
}

/// `((n + 2m) / n)^d`.
pub fn box_bound(n: i64, m: i64, d: u32) -> Rational {
    (int(n + 2 * m) / int(n)).pow(d as i32)
}

/// Builds the tile and reports its actual expansion ratio against `B`.
pub fn tile_report(b: &FiniteSubset, eps: &Rational) -> Result<(Tile, TileReport)> {
    b.require_nonempty("B")?;
    let tile = build_tile(b, eps)?;
    let ratio = expansion_ratio(&tile.elements(), b)?;
    let bound = box_bound(tile.box_side, b.free_radius(), b.group().free_rank as u32);
    let report = TileReport {
        box_side: tile.box_side,
        tile_size: tile.size(),
        ratio,
        bound,
    };
    Ok((tile, report))
}
