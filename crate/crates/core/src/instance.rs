//! Self-contained JSON instance files: poset, sheaf, coefficient group, and
//! optional perfect-complex and monotone-map blocks.
//!
//! Matrices are row-major nested arrays; groups are either invariant-factor
//! lists (0 = Z) or explicit presentations. Restriction matrices are given on
//! covering pairs only; composites are derived along chains and re-checked by
//! full functoriality validation, so path independence is enforced at parse
//! time. Serialization is canonical (covering pairs, sorted), making
//! parse ∘ serialize the identity on canonical files.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abgroup::FpAbGroup;
use crate::chains::PerfectComplex;
use crate::exactlin::IntMatrix;
use crate::site::{
    random_sheaf, MonotoneMap, Poset, RandomSheafParams, Sheaf, DEFAULT_MAX_ELEMENTS,
    STALK_FACTOR_POOL,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetBlock {
    pub elements: Vec<String>,
    pub relations: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, untagged)]
pub enum GroupBlock {
    InvariantFactors { invariant_factors: Vec<u64> },
    Presentation {
        ambient_rank: usize,
        relations: Vec<Vec<i64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionBlock {
    pub from: usize,
    pub to: usize,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafBlock {
    pub stalks: Vec<GroupBlock>,
    /// restriction matrices on covering pairs x ⋖ y only
    pub restrictions: Vec<RestrictionBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerfectComplexBlock {
    pub lo: i64,
    pub ranks: Vec<usize>,
    pub differentials: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapBlock {
    pub target: PosetBlock,
    pub assignment: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub poset: PosetBlock,
    pub sheaf: SheafBlock,
    pub coefficients: GroupBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perfect_complex: Option<PerfectComplexBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapBlock>,
}

/// Parsed and validated engine values of one instance.
pub struct Instance {
    pub poset: Poset,
    pub sheaf: Sheaf,
    pub coefficients: FpAbGroup,
    pub perfect: Option<PerfectComplex>,
    pub map: Option<MonotoneMap>,
}

fn matrix_from_rows(rows: &[Vec<i64>], expect_rows: usize, expect_cols: usize) -> Result<IntMatrix, String> {
    if rows.len() != expect_rows {
        return Err(format!("matrix has {} rows, expected {expect_rows}", rows.len()));
    }
    for r in rows {
        if r.len() != expect_cols {
            return Err(format!("matrix row has {} entries, expected {expect_cols}", r.len()));
        }
    }
    Ok(IntMatrix::from_fn(expect_rows, expect_cols, |r, c| {
        BigInt::from(rows[r][c])
    }))
}

fn matrix_to_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| i64::try_from(m.get(r, c).clone()).expect("matrix entry exceeds i64"))
                .collect()
        })
        .collect()
}

impl GroupBlock {
    pub fn build(&self) -> Result<FpAbGroup, String> {
        match self {
            GroupBlock::InvariantFactors { invariant_factors } => {
                for w in invariant_factors.windows(2) {
                    let bad = match (w[0], w[1]) {
                        (0, _) => w[1] != 0,
                        (_, 0) => false,
                        (a, b) => b % a != 0,
                    };
                    if bad || w[0] == 1 {
                        return Err(format!("not an invariant-factor chain: {invariant_factors:?}"));
                    }
                }
                if invariant_factors.first() == Some(&1) {
                    return Err("invariant factor 1 is not allowed".to_string());
                }
                Ok(FpAbGroup::from_invariant_factors(invariant_factors))
            }
            GroupBlock::Presentation { ambient_rank, relations } => {
                let cols = relations.len();
                let mut m = IntMatrix::zero(*ambient_rank, cols);
                for (j, col) in relations.iter().enumerate() {
                    if col.len() != *ambient_rank {
                        return Err("relation column length mismatch".to_string());
                    }
                    for (i, v) in col.iter().enumerate() {
                        m.set(i, j, BigInt::from(*v));
                    }
                }
                Ok(FpAbGroup::new(*ambient_rank, m))
            }
        }
    }

    pub fn presentation_of(g: &FpAbGroup) -> GroupBlock {
        let r = g.relations();
        let relations: Vec<Vec<i64>> = (0..r.cols())
            .map(|j| {
                (0..r.rows())
                    .map(|i| i64::try_from(r.get(i, j).clone()).expect("relation entry exceeds i64"))
                    .collect()
            })
            .collect();
        GroupBlock::Presentation { ambient_rank: g.ambient_rank(), relations }
    }

    pub fn factors_of(g: &FpAbGroup) -> GroupBlock {
        GroupBlock::InvariantFactors {
            invariant_factors: g
                .invariant_factors()
                .iter()
                .map(|d| u64::try_from(d.clone()).expect("invariant factor exceeds u64"))
                .collect(),
        }
    }
}

/// Covering pairs (Hasse edges) of a poset, sorted.
pub fn covering_pairs(p: &Poset) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..p.len() {
        for y in 0..p.len() {
            if p.lt(x, y) && !(0..p.len()).any(|z| p.lt(x, z) && p.lt(z, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile, String> {
        serde_json::from_str(text).map_err(|e| format!("parse error: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization")
    }

    pub fn build(&self) -> Result<Instance, String> {
        self.build_with_max(DEFAULT_MAX_ELEMENTS)
    }

    pub fn build_with_max(&self, max_elements: usize) -> Result<Instance, String> {
        let poset = Poset::with_max(self.poset.elements.clone(), &self.poset.relations, max_elements)?;
        let n = poset.len();
        if self.sheaf.stalks.len() != n {
            return Err(format!(
                "sheaf has {} stalks for {n} elements",
                self.sheaf.stalks.len()
            ));
        }
        let stalks: Vec<FpAbGroup> = self
            .sheaf
            .stalks
            .iter()
            .map(|b| b.build())
            .collect::<Result<_, _>>()?;
        // restriction matrices must be given exactly on covering pairs
        let covers = covering_pairs(&poset);
        let mut given: BTreeMap<(usize, usize), IntMatrix> = BTreeMap::new();
        for r in &self.sheaf.restrictions {
            if r.from >= n || r.to >= n {
                return Err("restriction indices out of range".to_string());
            }
            if !covers.contains(&(r.from, r.to)) {
                return Err(format!("restriction {} -> {} is not a covering pair", r.from, r.to));
            }
            let m = matrix_from_rows(
                &r.matrix,
                stalks[r.to].ambient_rank(),
                stalks[r.from].ambient_rank(),
            )?;
            if given.insert((r.from, r.to), m).is_some() {
                return Err(format!("duplicate restriction {} -> {}", r.from, r.to));
            }
        }
        for &(x, y) in &covers {
            if !given.contains_key(&(x, y)) {
                return Err(format!("missing restriction for covering pair {x} -> {y}"));
            }
        }
        // derive composites along cover chains; full functoriality validation
        // below makes the result path-independent
        let mut matrices: BTreeMap<(usize, usize), IntMatrix> = given.clone();
        for x in 0..n {
            for y in 0..n {
                if poset.lt(x, y) && !matrices.contains_key(&(x, y)) {
                    let m = compose_along_chain(&poset, &given, x, y)?;
                    matrices.insert((x, y), m);
                }
            }
        }
        let mut restrictions = BTreeMap::new();
        for ((x, y), m) in matrices {
            let hom = crate::abgroup::GroupHom::try_new(stalks[x].clone(), stalks[y].clone(), m)
                .map_err(|e| format!("restriction {x} -> {y}: {e}"))?;
            restrictions.insert((x, y), hom);
        }
        let sheaf = Sheaf::try_new(poset.clone(), stalks, restrictions)?;
        let coefficients = self.coefficients.build()?;
        let perfect = match &self.perfect_complex {
            None => None,
            Some(b) => {
                if !b.ranks.is_empty() && b.differentials.len() + 1 != b.ranks.len() {
                    return Err("perfect complex: differential count mismatch".to_string());
                }
                let diffs: Vec<IntMatrix> = b
                    .differentials
                    .iter()
                    .enumerate()
                    .map(|(i, d)| matrix_from_rows(d, b.ranks[i + 1], b.ranks[i]))
                    .collect::<Result<_, _>>()?;
                for i in 0..diffs.len().saturating_sub(1) {
                    if !diffs[i + 1].mul(&diffs[i]).is_zero() {
                        return Err("perfect complex: d∘d != 0".to_string());
                    }
                }
                Some(PerfectComplex::new(b.lo, b.ranks.clone(), diffs))
            }
        };
        let map = match &self.map {
            None => None,
            Some(b) => {
                let target = Poset::with_max(b.target.elements.clone(), &b.target.relations, max_elements)?;
                Some(MonotoneMap::new(poset.clone(), target, b.assignment.clone())?)
            }
        };
        Ok(Instance { poset, sheaf, coefficients, perfect, map })
    }

    /// Canonical file for given engine values: cover relations only, stalk
    /// presentations, coefficient invariant factors.
    pub fn from_values(
        sheaf: &Sheaf,
        coefficients: &FpAbGroup,
        perfect: Option<&PerfectComplex>,
        map: Option<&MonotoneMap>,
    ) -> InstanceFile {
        let poset = &sheaf.poset;
        let covers = covering_pairs(poset);
        let restrictions = covers
            .iter()
            .map(|&(x, y)| RestrictionBlock {
                from: x,
                to: y,
                matrix: matrix_to_rows(&sheaf.restriction(x, y).matrix),
            })
            .collect();
        InstanceFile {
            poset: PosetBlock {
                elements: poset.elements().to_vec(),
                relations: covers,
            },
            sheaf: SheafBlock {
                stalks: (0..poset.len())
                    .map(|x| GroupBlock::presentation_of(sheaf.stalk(x)))
                    .collect(),
                restrictions,
            },
            coefficients: GroupBlock::factors_of(coefficients),
            perfect_complex: perfect.map(|c| PerfectComplexBlock {
                lo: c.lo,
                ranks: c.ranks.clone(),
                differentials: c.diffs.iter().map(matrix_to_rows).collect(),
            }),
            map: map.map(|f| MapBlock {
                target: PosetBlock {
                    elements: f.target.elements().to_vec(),
                    relations: covering_pairs(&f.target),
                },
                assignment: f.assignment.clone(),
            }),
        }
    }

    /// One-line description used in reports.
    pub fn description(&self) -> String {
        let a = match &self.coefficients {
            GroupBlock::InvariantFactors { invariant_factors } => format!("{invariant_factors:?}"),
            GroupBlock::Presentation { ambient_rank, relations } => {
                format!("presented({ambient_rank}g {}r)", relations.len())
            }
        };
        format!(
            "poset[{}] sheaf[{} stalks] A={}{}{}",
            self.poset.elements.len(),
            self.sheaf.stalks.len(),
            a,
            if self.perfect_complex.is_some() { " +C" } else { "" },
            if self.map.is_some() { " +f" } else { "" },
        )
    }
}

fn compose_along_chain(
    poset: &Poset,
    given: &BTreeMap<(usize, usize), IntMatrix>,
    x: usize,
    y: usize,
) -> Result<IntMatrix, String> {
    // walk from x to y through covers, always taking the smallest next step
    let mut current = x;
    let mut acc: Option<IntMatrix> = None;
    while current != y {
        let next = (0..poset.len())
            .find(|&z| poset.leq(z, y) && given.contains_key(&(current, z)))
            .ok_or_else(|| format!("no cover chain from {x} to {y}"))?;
        let step = &given[&(current, next)];
        acc = Some(match acc {
            None => step.clone(),
            Some(m) => step.mul(&m),
        });
        current = next;
    }
    acc.ok_or_else(|| format!("empty chain from {x} to {y}"))
}

/// Named built-in fixtures.
pub fn builtin(name: &str) -> Option<InstanceFile> {
    let (poset, stalk): (Poset, FpAbGroup) = match name {
        "pc4" => (Poset::pc4(), FpAbGroup::free(1)),
        "pc4-z4" => (Poset::pc4(), FpAbGroup::cyclic(4)),
        "ss6" => (Poset::ss6(), FpAbGroup::free(1)),
        "ss6-z4" => (Poset::ss6(), FpAbGroup::cyclic(4)),
        "point-z4" => (Poset::point(), FpAbGroup::cyclic(4)),
        _ => return None,
    };
    let sheaf = crate::site::constant_sheaf(&poset, &stalk);
    let a = FpAbGroup::cyclic(2);
    let res = crate::abgroup::free_resolution(&a);
    let c = PerfectComplex::from_resolution(&res);
    let map = if poset.len() > 1 {
        // collapse to a point
        MonotoneMap::new(poset.clone(), Poset::point(), vec![0; poset.len()]).ok()
    } else {
        Some(MonotoneMap::identity(&poset))
    };
    Some(InstanceFile::from_values(&sheaf, &a, Some(&c), map.as_ref()))
}

pub fn builtin_names() -> &'static [&'static str] {
    &["pc4", "pc4-z4", "ss6", "ss6-z4", "point-z4"]
}

fn random_poset_with(rng: &mut ChaCha8Rng, max_elements: usize) -> Poset {
    let n = rng.gen_range(1..=max_elements.clamp(1, DEFAULT_MAX_ELEMENTS));
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    // edges only go up in index, so antisymmetry holds by construction
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                relations.push((i, j));
            }
        }
    }
    Poset::with_max(names, &relations, max_elements).expect("generated poset is valid")
}

/// Deterministic random poset with at most `max_elements` elements.
pub fn random_poset(seed: u64, max_elements: usize) -> Poset {
    random_poset_with(&mut ChaCha8Rng::seed_from_u64(seed), max_elements)
}

/// Deterministic random instance: poset, sheaf, coefficients, a short
/// perfect complex, and a monotone map.
pub fn random_instance(seed: u64, max_elements: usize) -> InstanceFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poset = random_poset_with(&mut rng, max_elements);
    let sheaf = random_sheaf(
        &poset,
        rng.gen(),
        RandomSheafParams { summands: rng.gen_range(1..=2), quotient: rng.gen_bool(0.3) },
    );
    let a = random_coefficients(rng.gen());
    let perfect = random_perfect_complex(rng.gen());
    // a monotone map: collapse to a point or split by height over chain(2)
    let map = if rng.gen_bool(0.5) || poset.is_empty() {
        MonotoneMap::new(poset.clone(), Poset::point(), vec![0; poset.len()]).unwrap()
    } else {
        let assignment: Vec<usize> = (0..poset.len())
            .map(|x| if poset.down_set(x).len() == 1 { 0 } else { 1 })
            .collect();
        MonotoneMap::new(poset.clone(), Poset::chain(2), assignment).unwrap()
    };
    InstanceFile::from_values(&sheaf, &a, Some(&perfect), Some(&map))
}

/// Deterministic random coefficient group: 1–2 cyclic factors from the
/// standard pool, massaged into a valid invariant-factor chain.
pub fn random_coefficients(seed: u64) -> FpAbGroup {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=2);
    let factors: Vec<u64> = (0..k)
        .map(|_| STALK_FACTOR_POOL[rng.gen_range(0..STALK_FACTOR_POOL.len())])
        .collect();
    factors
        .into_iter()
        .fold(FpAbGroup::zero(), |acc, d| acc.direct_sum(&FpAbGroup::cyclic(d)))
}

/// Deterministic random perfect complex of length ≤ 2 with ranks ≤ 2.
pub fn random_perfect_complex(seed: u64) -> PerfectComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len: usize = rng.gen_range(1..=2);
    let lo = rng.gen_range(-1..=0);
    let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=2)).collect();
    let diffs: Vec<IntMatrix> = (0..len.saturating_sub(1))
        .map(|i| {
            IntMatrix::from_fn(ranks[i + 1], ranks[i], |_, _| BigInt::from(rng.gen_range(-2i64..=2)))
        })
        .collect();
    PerfectComplex::new(lo, ranks, diffs)
}
