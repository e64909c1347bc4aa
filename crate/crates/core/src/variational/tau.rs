use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::kinematics::{polarization_basis, PolarizationBasis};
use crate::{Error, Result, Vec3};

/// Photon wave vector together with its polarization triad, computed once
/// and shared by every predicate evaluation at that `k_ph`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonFrame {
    pub k_ph: Vec3,
    pub basis: PolarizationBasis,
}

impl PhotonFrame {
    pub fn new(k_ph: Vec3) -> Result<Self> {
        Ok(PhotonFrame { k_ph, basis: polarization_basis(k_ph)? })
    }
}

/// Direction used by a half-space test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Direction {
    Fixed(Vec3),
    EpsH,
    EpsV,
    PhotonAxis,
}

impl Direction {
    fn resolve(self, frame: &PhotonFrame) -> Vec3 {
        match self {
            Direction::Fixed(v) => v,
            Direction::EpsH => frame.basis.eps_h,
            Direction::EpsV => frame.basis.eps_v,
            Direction::PhotonAxis => frame.basis.khat,
        }
    }
}

/// Region predicate over `(k_ph, k)` built from half-space and radial tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Region {
    All,
    Empty,
    /// `k . v > 0`
    HalfSpace(Direction),
    /// `|k| < radius`
    Ball(f64),
    Not(Box<Region>),
    And(Box<Region>, Box<Region>),
    Or(Box<Region>, Box<Region>),
}

impl Region {
    pub fn contains(&self, frame: &PhotonFrame, k: Vec3) -> bool {
        match self {
            Region::All => true,
            Region::Empty => false,
            Region::HalfSpace(d) => k.dot(d.resolve(frame)) > 0.0,
            Region::Ball(r) => k.norm() < *r,
            Region::Not(a) => !a.contains(frame, k),
            Region::And(a, b) => a.contains(frame, k) && b.contains(frame, k),
            Region::Or(a, b) => a.contains(frame, k) || b.contains(frame, k),
        }
    }

    pub fn not(self) -> Region {
        Region::Not(Box::new(self))
    }

    pub fn and(self, other: Region) -> Region {
        Region::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Region) -> Region {
        Region::Or(Box::new(self), Box::new(other))
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Boolean coefficients `tau_{m,n}(k_ph, k)`; entries that are absent are
/// identically zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TauTable {
    pub entries: BTreeMap<(usize, usize), Region>,
}

impl TauTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, m: usize, n: usize, region: Region) -> Self {
        self.entries.insert((m, n), region);
        self
    }

    pub fn max_m(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn max_n(&self) -> usize {
        self.entries.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn tau(&self, m: usize, n: usize, frame: &PhotonFrame, k: Vec3) -> bool {
        self.entries.get(&(m, n)).is_some_and(|r| r.contains(frame, k))
    }

    /// `Z^el(k) = sum tau_{m,n} / (m! n!)`, evaluated at the given photon.
    pub fn z_el(&self, frame: &PhotonFrame, k: Vec3) -> f64 {
        self.entries
            .iter()
            .filter(|(_, r)| r.contains(frame, k))
            .map(|(&(m, n), _)| 1.0 / (factorial(m) * factorial(n)))
            .sum()
    }

    /// `sum (m + n) tau_{m,n} / (m! n!)`
    pub fn photon_number_weight(&self, frame: &PhotonFrame, k: Vec3) -> f64 {
        self.entries
            .iter()
            .filter(|(_, r)| r.contains(frame, k))
            .map(|(&(m, n), _)| (m + n) as f64 / (factorial(m) * factorial(n)))
            .sum()
    }

    /// Checks on random samples that `Z^el(k)` is positive and does not
    /// depend on the photon wave vector.
    pub fn check_z_el(&self, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng, s: f64| {
            Vec3::new(rng.gen_range(-s..s), rng.gen_range(-s..s), rng.gen_range(-s..s))
        };
        for _ in 0..samples {
            let k = draw(&mut rng, 3.0);
            let f1 = PhotonFrame::new(draw(&mut rng, 2.0))?;
            let f2 = PhotonFrame::new(draw(&mut rng, 2.0))?;
            let (z1, z2) = (self.z_el(&f1, k), self.z_el(&f2, k));
            if !(z1 > 0.0) {
                return Err(Error::domain(format!("Z^el vanishes at k = {k:?}")));
            }
            if (z1 - z2).abs() > 1e-12 * z1 {
                return Err(Error::domain(format!(
                    "Z^el depends on k_ph at k = {k:?}: {z1} vs {z2}"
                )));
            }
        }
        Ok(())
    }
}

/// `tau_{1,0} = Theta(k . eps_h(k_ph))`, `tau_{0,0} = 1 - tau_{1,0}`.
pub fn tau_specific() -> TauTable {
    let lit = Region::HalfSpace(Direction::EpsH);
    TauTable::new().with(1, 0, lit.clone()).with(0, 0, lit.not())
}

// Entries sharing a factorial weight can be swapped by a k_ph-dependent
// predicate without changing Z^el.
const WEIGHT_ONE: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];
const WEIGHT_HALF: [(usize, usize); 4] = [(2, 0), (0, 2), (2, 1), (1, 2)];

/// Random table with `max_m, max_n <= 2` whose `Z^el` is independent of
/// `k_ph` by construction.
///
/// k-space is cut into cells by a fixed half-space and a radial test. Each
/// cell switches on a random set of entries and, optionally, a pair of
/// equal-weight entries selected by a photon-dependent half-space.
pub fn random_small_table(seed: u64) -> TauTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        .normalized()
        .unwrap_or(Vec3::X);
    let radius = rng.gen_range(0.5..2.0);
    let half = Region::HalfSpace(Direction::Fixed(v));
    let ball = Region::Ball(radius);
    let cells = [
        half.clone().and(ball.clone()),
        half.clone().and(ball.clone().not()),
        half.clone().not().and(ball.clone()),
        half.not().and(ball.not()),
    ];

    let mut members: BTreeMap<(usize, usize), Region> = BTreeMap::new();
    let mut add = |key: (usize, usize), r: Region| {
        let merged = match members.remove(&key) {
            Some(prev) => prev.or(r),
            None => r,
        };
        members.insert(key, merged);
    };
    for cell in cells {
        let pool: Vec<(usize, usize)> = WEIGHT_ONE.iter().chain(&WEIGHT_HALF).copied().collect();
        let mut fixed: Vec<(usize, usize)> =
            pool.iter().copied().filter(|_| rng.gen_bool(0.35)).collect();
        let split = if rng.gen_bool(0.6) {
            let group = if rng.gen_bool(0.7) { &WEIGHT_ONE } else { &WEIGHT_HALF };
            let free: Vec<_> = group.iter().copied().filter(|e| !fixed.contains(e)).collect();
            (free.len() >= 2).then(|| {
                let a = free[rng.gen_range(0..free.len())];
                let rest: Vec<_> = free.iter().copied().filter(|&e| e != a).collect();
                let b = rest[rng.gen_range(0..rest.len())];
                let dir = match rng.gen_range(0..3) {
                    0 => Direction::EpsH,
                    1 => Direction::EpsV,
                    _ => Direction::PhotonAxis,
                };
                (a, b, dir)
            })
        } else {
            None
        };
        if fixed.is_empty() && split.is_none() {
            fixed.push((0, 0));
        }
        for e in fixed {
            add(e, cell.clone());
        }
        if let Some((a, b, dir)) = split {
            let lit = Region::HalfSpace(dir);
            add(a, cell.clone().and(lit.clone()));
            add(b, cell.clone().and(lit.not()));
        }
    }
    TauTable { entries: members }
}
