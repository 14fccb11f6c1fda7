//! Finite posets as Alexandrov sites, monotone maps, and sheaves as functors.
//!
//! Open sets are up-sets and restriction maps run upward: x ≤ y gives
//! F(x) → F(y), so the stalk at x is the value at x (sections over the
//! minimal open neighborhood U_x = {y : y ≥ x}).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abgroup::{
    free_resolution, induced_on_tensor, kernel, quotient_by_subgroup, tensor, tor_with_resolution,
    factor_through_injection, FpAbGroup, FreeResolution, GroupHom, TorData,
};
use crate::exactlin::IntMatrix;

pub const DEFAULT_MAX_ELEMENTS: usize = 8;

/// A finite poset; the relation is stored reflexive-transitively closed.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset({:?})", self.elements)
    }
}

impl Poset {
    /// Builds from generating relations, closing reflexively and
    /// transitively; rejects cycles and oversize inputs.
    pub fn new(elements: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, String> {
        Self::with_max(elements, relations, DEFAULT_MAX_ELEMENTS)
    }

    pub fn with_max(
        elements: Vec<String>,
        relations: &[(usize, usize)],
        max_elements: usize,
    ) -> Result<Self, String> {
        let n = elements.len();
        if n > max_elements {
            return Err(format!("poset has {n} elements, bound is {max_elements}"));
        }
        {
            let mut sorted = elements.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err("duplicate element names".to_string());
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err("relation index out of range".to_string());
            }
            leq[a][b] = true;
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(format!(
                        "antisymmetry violated: {} and {} are mutually comparable",
                        elements[i], elements[j]
                    ));
                }
            }
        }
        Ok(Poset { elements, leq })
    }

    pub fn from_names(names: &[&str], relations: &[(usize, usize)]) -> Result<Self, String> {
        Self::new(names.iter().map(|s| s.to_string()).collect(), relations)
    }

    pub fn empty() -> Self {
        Poset { elements: vec![], leq: vec![] }
    }

    pub fn point() -> Self {
        Poset::from_names(&["pt"], &[]).unwrap()
    }

    /// The four-point circle model: minima a, b below maxima c, d.
    pub fn pc4() -> Self {
        Poset::from_names(&["a", "b", "c", "d"], &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    /// The six-point sphere model: PC4 plus maxima p, q above a, b, c, d.
    pub fn ss6() -> Self {
        Poset::from_names(
            &["a", "b", "c", "d", "p", "q"],
            &[
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (0, 4),
                (1, 4),
                (2, 4),
                (3, 4),
                (0, 5),
                (1, 5),
                (2, 5),
                (3, 5),
            ],
        )
        .unwrap()
    }

    /// Total order 0 < 1 < ... < n-1.
    pub fn chain(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let rels: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Poset::new(names, &rels).unwrap()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq(x, y)).collect()
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq(y, x)).collect()
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|y| self.leq(m, y)))
    }

    /// Strictly increasing (n+1)-tuples in lexicographic order of indices.
    pub fn strict_chains(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..self.len()).map(|i| vec![i]).collect();
        if n == 0 {
            return stack;
        }
        // depth-first, extending in index order keeps the output lexicographic
        fn extend(p: &Poset, prefix: &[usize], depth: usize, out: &mut Vec<Vec<usize>>) {
            if depth == 0 {
                out.push(prefix.to_vec());
                return;
            }
            let last = *prefix.last().unwrap();
            for y in 0..p.len() {
                if p.lt(last, y) {
                    let mut next = prefix.to_vec();
                    next.push(y);
                    extend(p, &next, depth - 1, out);
                }
            }
        }
        out.clear();
        for start in stack.drain(..) {
            extend(self, &start, n, &mut out);
        }
        out
    }

    /// Length of the longest strict chain minus one; 0 for the empty poset.
    pub fn height(&self) -> usize {
        let mut h = 0;
        while !self.strict_chains(h + 1).is_empty() {
            h += 1;
        }
        h
    }

    /// Induced subposet on the given (sorted) element indices.
    pub fn subposet(&self, indices: &[usize]) -> Poset {
        let elements: Vec<String> = indices.iter().map(|&i| self.elements[i].clone()).collect();
        let n = indices.len();
        let mut leq = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                leq[a][b] = self.leq(indices[a], indices[b]);
            }
        }
        Poset { elements, leq }
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                comp.push(x);
                for y in 0..n {
                    if !seen[y] && (self.leq(x, y) || self.leq(y, x)) {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort();
            comps.push(comp);
        }
        comps
    }
}

/// A monotone map of posets.
#[derive(Clone, Debug)]
pub struct MonotoneMap {
    pub source: Poset,
    pub target: Poset,
    pub assignment: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Poset, target: Poset, assignment: Vec<usize>) -> Result<Self, String> {
        if assignment.len() != source.len() {
            return Err("assignment length mismatch".to_string());
        }
        for &v in &assignment {
            if v >= target.len() {
                return Err("assignment out of range".to_string());
            }
        }
        for x in 0..source.len() {
            for y in 0..source.len() {
                if source.leq(x, y) && !target.leq(assignment[x], assignment[y]) {
                    return Err(format!(
                        "not monotone: {} <= {} but images are incomparable",
                        source.elements()[x],
                        source.elements()[y]
                    ));
                }
            }
        }
        Ok(MonotoneMap { source, target, assignment })
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap {
            source: p.clone(),
            target: p.clone(),
            assignment: (0..p.len()).collect(),
        }
    }

    pub fn compose(&self, first: &MonotoneMap) -> MonotoneMap {
        assert_eq!(first.target.len(), self.source.len());
        MonotoneMap {
            source: first.source.clone(),
            target: self.target.clone(),
            assignment: first.assignment.iter().map(|&x| self.assignment[x]).collect(),
        }
    }

    /// Preimage of the minimal open neighborhood of y.
    pub fn fiber_upset(&self, y: usize) -> Vec<usize> {
        (0..self.source.len())
            .filter(|&x| self.target.leq(y, self.assignment[x]))
            .collect()
    }
}

/// A sheaf on an Alexandrov site: a functor from the poset to abelian groups.
#[derive(Clone)]
pub struct Sheaf {
    pub poset: Poset,
    stalks: Vec<FpAbGroup>,
    /// restriction for every pair x <= y, keyed (x, y); includes identities
    restrictions: BTreeMap<(usize, usize), GroupHom>,
}

impl std::fmt::Debug for Sheaf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Sheaf on {:?} with stalks {:?}", self.poset, self.stalks)
    }
}

impl Sheaf {
    pub fn new(
        poset: Poset,
        stalks: Vec<FpAbGroup>,
        restrictions: BTreeMap<(usize, usize), GroupHom>,
    ) -> Self {
        Self::try_new(poset, stalks, restrictions).expect("invalid sheaf")
    }

    pub fn try_new(
        poset: Poset,
        stalks: Vec<FpAbGroup>,
        mut restrictions: BTreeMap<(usize, usize), GroupHom>,
    ) -> Result<Self, String> {
        if stalks.len() != poset.len() {
            return Err("stalk count mismatch".to_string());
        }
        for x in 0..poset.len() {
            restrictions
                .entry((x, x))
                .or_insert_with(|| GroupHom::identity(&stalks[x]));
        }
        let sheaf = Sheaf { poset, stalks, restrictions };
        sheaf.verify_functoriality()?;
        Ok(sheaf)
    }

    /// Full functoriality: identities at each element and composition over
    /// every composable pair x <= y <= z.
    pub fn verify_functoriality(&self) -> Result<(), String> {
        let n = self.poset.len();
        for x in 0..n {
            for y in 0..n {
                if !self.poset.leq(x, y) {
                    continue;
                }
                let rho = self
                    .restrictions
                    .get(&(x, y))
                    .ok_or_else(|| format!("missing restriction {x} -> {y}"))?;
                if rho.source.ambient_rank() != self.stalks[x].ambient_rank()
                    || rho.target.ambient_rank() != self.stalks[y].ambient_rank()
                {
                    return Err(format!("restriction {x} -> {y} has wrong shape"));
                }
                if x == y && !rho.equals(&GroupHom::identity(&self.stalks[x])) {
                    return Err(format!("restriction at {x} is not the identity"));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.poset.leq(x, y) && self.poset.leq(y, z) {
                        let xy = &self.restrictions[&(x, y)];
                        let yz = &self.restrictions[&(y, z)];
                        let xz = &self.restrictions[&(x, z)];
                        if !yz.compose(xy).equals(xz) {
                            return Err(format!(
                                "functoriality fails on {} <= {} <= {}",
                                self.poset.elements()[x],
                                self.poset.elements()[y],
                                self.poset.elements()[z]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn stalk(&self, x: usize) -> &FpAbGroup {
        &self.stalks[x]
    }

    pub fn restriction(&self, x: usize, y: usize) -> &GroupHom {
        assert!(self.poset.leq(x, y), "restriction along a non-relation");
        &self.restrictions[&(x, y)]
    }

    pub fn is_zero_sheaf(&self) -> bool {
        self.stalks.iter().all(|g| g.is_trivial())
    }

    pub fn restrict_to(&self, indices: &[usize]) -> Sheaf {
        let poset = self.poset.subposet(indices);
        let stalks: Vec<FpAbGroup> = indices.iter().map(|&i| self.stalks[i].clone()).collect();
        let mut restrictions = BTreeMap::new();
        for (a, &ia) in indices.iter().enumerate() {
            for (b, &ib) in indices.iter().enumerate() {
                if self.poset.leq(ia, ib) {
                    restrictions.insert((a, b), self.restrictions[&(ia, ib)].clone());
                }
            }
        }
        Sheaf { poset, stalks, restrictions }
    }

    pub fn direct_sum(&self, other: &Sheaf) -> Sheaf {
        assert_eq!(self.poset, other.poset);
        let stalks: Vec<FpAbGroup> = (0..self.poset.len())
            .map(|x| self.stalks[x].direct_sum(&other.stalks[x]))
            .collect();
        let mut restrictions = BTreeMap::new();
        for (&(x, y), rho) in &self.restrictions {
            let rho2 = &other.restrictions[&(x, y)];
            restrictions.insert(
                (x, y),
                GroupHom::new(
                    stalks[x].clone(),
                    stalks[y].clone(),
                    rho.matrix.block_diag(&rho2.matrix),
                ),
            );
        }
        Sheaf { poset: self.poset.clone(), stalks, restrictions }
    }
}

/// A map of sheaves: a stalkwise hom commuting with all restrictions.
#[derive(Clone)]
pub struct SheafHom {
    pub source: Sheaf,
    pub target: Sheaf,
    pub components: Vec<GroupHom>,
}

impl SheafHom {
    pub fn new(source: Sheaf, target: Sheaf, components: Vec<GroupHom>) -> Self {
        Self::try_new(source, target, components).expect("invalid sheaf hom")
    }

    pub fn try_new(source: Sheaf, target: Sheaf, components: Vec<GroupHom>) -> Result<Self, String> {
        assert_eq!(source.poset, target.poset);
        assert_eq!(components.len(), source.poset.len());
        let n = source.poset.len();
        for x in 0..n {
            for y in 0..n {
                if source.poset.leq(x, y) {
                    let lhs = components[y].compose(source.restriction(x, y));
                    let rhs = target.restriction(x, y).compose(&components[x]);
                    if !lhs.equals(&rhs) {
                        return Err(format!("sheaf hom does not commute with restriction {x} -> {y}"));
                    }
                }
            }
        }
        Ok(SheafHom { source, target, components })
    }

    pub fn compose(&self, first: &SheafHom) -> SheafHom {
        let components = (0..self.components.len())
            .map(|x| self.components[x].compose(&first.components[x]))
            .collect();
        SheafHom {
            source: first.source.clone(),
            target: self.target.clone(),
            components,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|f| f.is_zero_hom())
    }
}

/// A bounded complex of sheaves with stalkwise d∘d = 0.
#[derive(Clone)]
pub struct SheafComplex {
    pub lo: i64,
    pub sheaves: Vec<Sheaf>,
    pub diffs: Vec<SheafHom>,
}

impl SheafComplex {
    pub fn new(lo: i64, sheaves: Vec<Sheaf>, diffs: Vec<SheafHom>) -> Self {
        if !sheaves.is_empty() {
            assert_eq!(diffs.len() + 1, sheaves.len());
        }
        for i in 0..diffs.len().saturating_sub(1) {
            assert!(
                diffs[i + 1].compose(&diffs[i]).is_zero(),
                "sheaf complex: d∘d != 0"
            );
        }
        SheafComplex { lo, sheaves, diffs }
    }

    pub fn concentrated(f: Sheaf, degree: i64) -> Self {
        SheafComplex { lo: degree, sheaves: vec![f], diffs: vec![] }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.sheaves.len() as i64 - 1
    }

    pub fn sheaf(&self, q: i64) -> Option<&Sheaf> {
        if q < self.lo || q > self.hi() {
            None
        } else {
            Some(&self.sheaves[(q - self.lo) as usize])
        }
    }

    /// Stalk complex at an element.
    pub fn stalk_complex(&self, x: usize) -> crate::chains::FpComplex {
        let terms: Vec<FpAbGroup> = self.sheaves.iter().map(|s| s.stalk(x).clone()).collect();
        let diffs: Vec<GroupHom> = self.diffs.iter().map(|d| d.components[x].clone()).collect();
        crate::chains::FpComplex::new(self.lo, terms, diffs)
    }

    pub fn restrict_to(&self, indices: &[usize]) -> SheafComplex {
        let sheaves: Vec<Sheaf> = self.sheaves.iter().map(|s| s.restrict_to(indices)).collect();
        let diffs: Vec<SheafHom> = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| SheafHom {
                source: sheaves[i].clone(),
                target: sheaves[i + 1].clone(),
                components: indices.iter().map(|&x| d.components[x].clone()).collect(),
            })
            .collect();
        SheafComplex { lo: self.lo, sheaves, diffs }
    }
}

pub fn constant_sheaf(poset: &Poset, g: &FpAbGroup) -> Sheaf {
    let stalks = vec![g.clone(); poset.len()];
    let mut restrictions = BTreeMap::new();
    for x in 0..poset.len() {
        for y in 0..poset.len() {
            if poset.leq(x, y) {
                restrictions.insert((x, y), GroupHom::identity(g));
            }
        }
    }
    Sheaf { poset: poset.clone(), stalks, restrictions }
}

/// Value G on the up-set of x, zero elsewhere, identity restrictions inside.
pub fn upset_extension(poset: &Poset, x: usize, g: &FpAbGroup) -> Sheaf {
    extension_on(poset, &poset.up_set(x), g)
}

/// Value G on the down-set of x, zero elsewhere.
pub fn downset_extension(poset: &Poset, x: usize, g: &FpAbGroup) -> Sheaf {
    extension_on(poset, &poset.down_set(x), g)
}

fn extension_on(poset: &Poset, support: &[usize], g: &FpAbGroup) -> Sheaf {
    let member = |x: usize| support.contains(&x);
    let stalks: Vec<FpAbGroup> = (0..poset.len())
        .map(|x| if member(x) { g.clone() } else { FpAbGroup::zero() })
        .collect();
    let mut restrictions = BTreeMap::new();
    for x in 0..poset.len() {
        for y in 0..poset.len() {
            if poset.leq(x, y) {
                let hom = if member(x) && member(y) {
                    GroupHom::identity(g)
                } else {
                    GroupHom::zero(&stalks[x], &stalks[y])
                };
                restrictions.insert((x, y), hom);
            }
        }
    }
    // up-sets are closed upward so identity-on-support is functorial; down-set
    // extensions mix identity and zero maps, which still compose correctly
    // because leaving the support is absorbing
    Sheaf::new(poset.clone(), stalks, restrictions)
}

/// Stalkwise tensor with A; restrictions are the induced maps.
pub fn sheaf_tensor(f: &Sheaf, a: &FpAbGroup) -> Sheaf {
    let stalks: Vec<FpAbGroup> = (0..f.poset.len()).map(|x| tensor(f.stalk(x), a)).collect();
    let mut restrictions = BTreeMap::new();
    for (&(x, y), rho) in &f.restrictions {
        restrictions.insert((x, y), induced_on_tensor(rho, a));
    }
    Sheaf { poset: f.poset.clone(), stalks, restrictions }
}

/// Stalkwise Tor with A, all stalks computed from one shared resolution.
pub fn sheaf_tor(f: &Sheaf, a: &FpAbGroup) -> Sheaf {
    let res = free_resolution(a);
    sheaf_tor_with_resolution(f, &res)
}

pub fn sheaf_tor_with_resolution(f: &Sheaf, res: &FreeResolution) -> Sheaf {
    let data: Vec<TorData> = (0..f.poset.len())
        .map(|x| tor_with_resolution(f.stalk(x), res))
        .collect();
    let stalks: Vec<FpAbGroup> = data.iter().map(|d| d.group.clone()).collect();
    let zm = FpAbGroup::free(res.m);
    let mut restrictions = BTreeMap::new();
    for (&(x, y), rho) in &f.restrictions {
        let step = induced_on_tensor(rho, &zm);
        let carried = step.compose(&data[x].inclusion);
        let factored = factor_through_injection(&data[y].inclusion, &carried);
        restrictions.insert(
            (x, y),
            GroupHom::new(stalks[x].clone(), stalks[y].clone(), factored.matrix),
        );
    }
    let sheaf = Sheaf { poset: f.poset.clone(), stalks, restrictions };
    sheaf
        .verify_functoriality()
        .expect("Tor sheaf functoriality");
    sheaf
}

/// F ⊗^L A as the two-term sheaf complex [F⊗Z^m → F⊗Z^k] in degrees −1, 0.
pub fn sheaf_derived_tensor(f: &Sheaf, a: &FpAbGroup) -> SheafComplex {
    sheaf_derived_tensor_with_resolution(f, &free_resolution(a))
}

pub fn sheaf_derived_tensor_with_resolution(f: &Sheaf, res: &FreeResolution) -> SheafComplex {
    let fm = sheaf_tensor(f, &FpAbGroup::free(res.m));
    let fk = sheaf_tensor(f, &FpAbGroup::free(res.k));
    let components: Vec<GroupHom> = (0..f.poset.len())
        .map(|x| {
            GroupHom::new(
                fm.stalk(x).clone(),
                fk.stalk(x).clone(),
                IntMatrix::identity(f.stalk(x).ambient_rank()).kronecker(&res.matrix),
            )
        })
        .collect();
    let d = SheafHom::new(fm.clone(), fk.clone(), components);
    SheafComplex::new(-1, vec![fm, fk], vec![d])
}

/// (f^*G)(x) = G(f(x)) with composed restrictions.
pub fn pullback(f: &MonotoneMap, g: &Sheaf) -> Sheaf {
    assert_eq!(g.poset, f.target);
    let stalks: Vec<FpAbGroup> = (0..f.source.len())
        .map(|x| g.stalk(f.assignment[x]).clone())
        .collect();
    let mut restrictions = BTreeMap::new();
    for x in 0..f.source.len() {
        for y in 0..f.source.len() {
            if f.source.leq(x, y) {
                restrictions.insert(
                    (x, y),
                    g.restriction(f.assignment[x], f.assignment[y]).clone(),
                );
            }
        }
    }
    Sheaf { poset: f.source.clone(), stalks, restrictions }
}

/// Global sections: compatible families in the product of all stalks, with
/// the inclusion into that product.
pub fn global_sections(f: &Sheaf) -> (FpAbGroup, GroupHom) {
    let n = f.poset.len();
    let product = (0..n).fold(FpAbGroup::zero(), |acc, x| acc.direct_sum(f.stalk(x)));
    let offsets: Vec<usize> = {
        let mut v = vec![0usize];
        for x in 0..n {
            let last = *v.last().unwrap();
            v.push(last + f.stalk(x).ambient_rank());
        }
        v
    };
    // difference map: (s_x) -> (rho_{x,y}(s_x) - s_y) over all strict pairs
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| x != y).map(move |y| (x, y)))
        .filter(|&(x, y)| f.poset.leq(x, y))
        .collect();
    let target = pairs
        .iter()
        .fold(FpAbGroup::zero(), |acc, &(_, y)| acc.direct_sum(f.stalk(y)));
    let mut m = IntMatrix::zero(target.ambient_rank(), product.ambient_rank());
    let mut row_off = 0;
    for &(x, y) in &pairs {
        let rho = f.restriction(x, y);
        for r in 0..rho.matrix.rows() {
            for c in 0..rho.matrix.cols() {
                m.set(row_off + r, offsets[x] + c, rho.matrix.get(r, c).clone());
            }
        }
        for r in 0..f.stalk(y).ambient_rank() {
            m.set(row_off + r, offsets[y] + r, BigInt::from(-1));
        }
        row_off += f.stalk(y).ambient_rank();
    }
    let diff = GroupHom::new(product, target, m);
    kernel(&diff)
}

/// Parameters for deterministic random sheaf generation.
#[derive(Clone, Copy, Debug)]
pub struct RandomSheafParams {
    pub summands: usize,
    pub quotient: bool,
}

pub const STALK_FACTOR_POOL: [u64; 8] = [0, 2, 3, 4, 6, 8, 9, 12];

/// Deterministic-in-seed sheaf: a direct sum of constant sheaves and
/// up-set/down-set extensions with cyclic stalk factors, optionally
/// quotiented by the subsheaf generated by a random global section.
pub fn random_sheaf(poset: &Poset, seed: u64, params: RandomSheafParams) -> Sheaf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = constant_sheaf(poset, &FpAbGroup::zero());
    let mut sheaf = zero;
    for _ in 0..params.summands {
        let g = FpAbGroup::cyclic(STALK_FACTOR_POOL[rng.gen_range(0..STALK_FACTOR_POOL.len())]);
        let block = if poset.is_empty() {
            constant_sheaf(poset, &g)
        } else {
            match rng.gen_range(0..3) {
                0 => constant_sheaf(poset, &g),
                1 => upset_extension(poset, rng.gen_range(0..poset.len()), &g),
                _ => downset_extension(poset, rng.gen_range(0..poset.len()), &g),
            }
        };
        sheaf = sheaf.direct_sum(&block);
    }
    if params.quotient && !poset.is_empty() {
        let (gs, incl) = global_sections(&sheaf);
        if !gs.is_trivial() {
            let coeffs: Vec<BigInt> = (0..gs.ambient_rank())
                .map(|_| BigInt::from(rng.gen_range(-2i64..3)))
                .collect();
            let section = incl.apply_vec(&coeffs);
            sheaf = quotient_by_global_section(&sheaf, &section);
        }
    }
    sheaf
}

/// Quotient of F by the subsheaf generated by one global section (given as a
/// vector in the product of all stalks, in element order).
pub fn quotient_by_global_section(f: &Sheaf, section: &[BigInt]) -> Sheaf {
    let n = f.poset.len();
    let mut offsets = vec![0usize];
    for x in 0..n {
        let last = *offsets.last().unwrap();
        offsets.push(last + f.stalk(x).ambient_rank());
    }
    assert_eq!(*offsets.last().unwrap(), section.len());
    let pieces: Vec<(FpAbGroup, GroupHom)> = (0..n)
        .map(|x| {
            let sx = IntMatrix::from_fn(f.stalk(x).ambient_rank(), 1, |r, _| {
                section[offsets[x] + r].clone()
            });
            quotient_by_subgroup(f.stalk(x), &sx)
        })
        .collect();
    let stalks: Vec<FpAbGroup> = pieces.iter().map(|(g, _)| g.clone()).collect();
    let mut restrictions = BTreeMap::new();
    for (&(x, y), rho) in &f.restrictions {
        restrictions.insert(
            (x, y),
            GroupHom::new(stalks[x].clone(), stalks[y].clone(), rho.matrix.clone()),
        );
    }
    let q = Sheaf { poset: f.poset.clone(), stalks, restrictions };
    q.verify_functoriality().expect("quotient sheaf functoriality");
    q
}
