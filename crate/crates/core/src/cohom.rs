//! Sheaf cohomology on finite posets via the normalized nerve cochain
//! complex over strict chains, hypercohomology of bounded sheaf complexes,
//! and a concrete pushforward model for monotone maps.
//!
//! C^n(X, F) = ∏ over strict (n+1)-chains x₀ < … < xₙ of F(xₙ), with
//!
//!   (df)(x₀<…<xₙ₊₁) = Σᵢ₌₀ⁿ (−1)ⁱ f(…x̂ᵢ…) + (−1)ⁿ⁺¹ ρ_{xₙ,xₙ₊₁}(f(x₀<…<xₙ)).
//!
//! Chains are ordered lexicographically by element index, fixed across runs,
//! so reports are byte-identical.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abgroup::{FpAbGroup, GroupHom};
use crate::chains::{cohomology, Bicomplex, CohomologyAt, FpComplex, TotalComplex};
use crate::exactlin::IntMatrix;
use crate::site::{MonotoneMap, Poset, Sheaf, SheafComplex, SheafHom};

/// The nerve cochain complex of a sheaf, with the chain index tables that
/// map product coordinates back to strict chains.
pub struct NerveComplex {
    pub complex: FpComplex,
    /// chains[n] lists the strict (n+1)-chains indexing degree n
    pub chains: Vec<Vec<Vec<usize>>>,
    /// offsets[n][i] = ambient offset of chain i's stalk block in degree n
    pub offsets: Vec<Vec<usize>>,
}

impl NerveComplex {
    /// Ambient offset and width of one chain's block.
    pub fn block(&self, n: usize, chain_idx: usize, sheaf: &Sheaf) -> (usize, usize) {
        let c = &self.chains[n][chain_idx];
        let last = *c.last().unwrap();
        (self.offsets[n][chain_idx], sheaf.stalk(last).ambient_rank())
    }
}

fn nerve_term(poset: &Poset, sheaf: &Sheaf, chains: &[Vec<usize>]) -> (FpAbGroup, Vec<usize>) {
    let _ = poset;
    let mut offsets = Vec::with_capacity(chains.len());
    let mut g = FpAbGroup::zero();
    for c in chains {
        offsets.push(g.ambient_rank());
        g = g.direct_sum(sheaf.stalk(*c.last().unwrap()));
    }
    (g, offsets)
}

pub fn nerve_complex(poset: &Poset, sheaf: &Sheaf) -> NerveComplex {
    assert_eq!(sheaf.poset, *poset, "sheaf lives on a different poset");
    if poset.is_empty() {
        return NerveComplex {
            complex: FpComplex::zero_complex(),
            chains: vec![],
            offsets: vec![],
        };
    }
    let height = poset.height();
    let mut chain_tables: Vec<Vec<Vec<usize>>> = Vec::with_capacity(height + 1);
    let mut terms: Vec<FpAbGroup> = Vec::with_capacity(height + 1);
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(height + 1);
    for n in 0..=height {
        let chains = poset.strict_chains(n);
        let (term, offs) = nerve_term(poset, sheaf, &chains);
        chain_tables.push(chains);
        terms.push(term);
        offsets.push(offs);
    }
    let mut diffs: Vec<GroupHom> = Vec::with_capacity(height);
    for n in 0..height {
        let src_chains = &chain_tables[n];
        let tgt_chains = &chain_tables[n + 1];
        // position lookup for source chains
        let index: BTreeMap<&[usize], usize> = src_chains
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_slice(), i))
            .collect();
        let mut m = IntMatrix::zero(terms[n + 1].ambient_rank(), terms[n].ambient_rank());
        for (ti, tc) in tgt_chains.iter().enumerate() {
            let t_off = offsets[n + 1][ti];
            let last = *tc.last().unwrap();
            let t_w = sheaf.stalk(last).ambient_rank();
            // faces omitting x_i for i <= n keep the last element
            for i in 0..=n {
                let mut face = tc.clone();
                face.remove(i);
                let si = index[face.as_slice()];
                let s_off = offsets[n][si];
                let sign = if i % 2 == 0 { 1i64 } else { -1 };
                for r in 0..t_w {
                    let v = m.get(t_off + r, s_off + r) + BigInt::from(sign);
                    m.set(t_off + r, s_off + r, v);
                }
            }
            // the last face composes with the restriction from x_n
            let face = &tc[..tc.len() - 1];
            let si = index[face];
            let s_off = offsets[n][si];
            let prev_last = tc[tc.len() - 2];
            let rho = sheaf.restriction(prev_last, last);
            let sign = if (n + 1) % 2 == 0 { 1i64 } else { -1 };
            for r in 0..rho.matrix.rows() {
                for c in 0..rho.matrix.cols() {
                    if !rho.matrix.get(r, c).is_zero() {
                        let v = m.get(t_off + r, s_off + c) + rho.matrix.get(r, c) * BigInt::from(sign);
                        m.set(t_off + r, s_off + c, v);
                    }
                }
            }
        }
        diffs.push(GroupHom::new(terms[n].clone(), terms[n + 1].clone(), m));
    }
    NerveComplex {
        complex: FpComplex::new(0, terms, diffs),
        chains: chain_tables,
        offsets,
    }
}

/// H^r(X, F) with representative bridges.
pub fn sheaf_cohomology(poset: &Poset, sheaf: &Sheaf, r: i64) -> CohomologyAt {
    cohomology(&nerve_complex(poset, sheaf).complex, r)
}

/// Degree -> invariant factors over the nerve support.
pub fn cohomology_table(poset: &Poset, sheaf: &Sheaf) -> Vec<(i64, Vec<BigInt>)> {
    nerve_complex(poset, sheaf).complex.cohomology_table()
}

/// Hypercohomology total complex: rows C^p(X, K^q), verticals induced by the
/// sheaf differentials, the usual (−1)^p sign on verticals.
pub fn hyper_nerve(poset: &Poset, k: &SheafComplex) -> TotalComplex {
    if poset.is_empty() || k.sheaves.is_empty() {
        return Bicomplex::new(k.lo, vec![], vec![]).total();
    }
    let nerves: Vec<NerveComplex> = k.sheaves.iter().map(|s| nerve_complex(poset, s)).collect();
    let rows: Vec<FpComplex> = nerves.iter().map(|n| n.complex.clone()).collect();
    // span of the bicomplex: the union of the (possibly trimmed) row supports
    let phi = rows.iter().filter_map(|r| r.support()).map(|(_, hi)| hi).max();
    let Some(phi) = phi else {
        return Bicomplex::new(k.lo, vec![], vec![]).total();
    };
    let mut vertical: Vec<Vec<GroupHom>> = Vec::new();
    for (qi, d) in k.diffs.iter().enumerate() {
        let mut per_degree = Vec::new();
        for p in 0..=phi as usize {
            let src = &nerves[qi];
            let tgt = &nerves[qi + 1];
            let src_term = src.complex.term(p as i64);
            let tgt_term = tgt.complex.term(p as i64);
            let mut m = IntMatrix::zero(tgt_term.ambient_rank(), src_term.ambient_rank());
            for (ci, chain) in src.chains[p].iter().enumerate() {
                let last = *chain.last().unwrap();
                let comp = &d.components[last];
                let s_off = src.offsets[p][ci];
                let t_off = tgt.offsets[p][ci];
                for r in 0..comp.matrix.rows() {
                    for c in 0..comp.matrix.cols() {
                        if !comp.matrix.get(r, c).is_zero() {
                            m.set(t_off + r, s_off + c, comp.matrix.get(r, c).clone());
                        }
                    }
                }
            }
            per_degree.push(GroupHom::new(src_term, tgt_term, m));
        }
        vertical.push(per_degree);
    }
    Bicomplex::new(k.lo, rows, vertical).total()
}

/// A chain map of hyper-nerve totals induced by a levelwise map of sheaf
/// complexes (same poset, same degree span).
pub fn hyper_nerve_map(
    poset: &Poset,
    src: &SheafComplex,
    tgt: &SheafComplex,
    components: &[SheafHom],
) -> crate::chains::ChainMap {
    assert_eq!(src.lo, tgt.lo);
    assert_eq!(src.sheaves.len(), tgt.sheaves.len());
    assert_eq!(components.len(), src.sheaves.len());
    let src_tot = hyper_nerve(poset, src);
    let tgt_tot = hyper_nerve(poset, tgt);
    let height = if poset.is_empty() { 0 } else { poset.height() };
    let src_nerves: Vec<NerveComplex> = src.sheaves.iter().map(|s| nerve_complex(poset, s)).collect();
    let tgt_nerves: Vec<NerveComplex> = tgt.sheaves.iter().map(|s| nerve_complex(poset, s)).collect();
    crate::chains::ChainMap::from_fn(
        src_tot.complex.clone(),
        tgt_tot.complex.clone(),
        |n| {
            let s_term = src_tot.complex.term(n);
            let t_term = tgt_tot.complex.term(n);
            let mut m = IntMatrix::zero(t_term.ambient_rank(), s_term.ambient_rank());
            for q in src.lo..=src.hi() {
                let p = n - q;
                if p < 0 || p > height as i64 {
                    continue;
                }
                let (s_off, s_w) = src_tot.component_span(n, q);
                let (t_off, t_w) = tgt_tot.component_span(n, q);
                if s_w == 0 || t_w == 0 {
                    continue;
                }
                let qi = (q - src.lo) as usize;
                let sheaf_map = &components[qi];
                let sn = &src_nerves[qi];
                let tn = &tgt_nerves[qi];
                for (ci, chain) in sn.chains[p as usize].iter().enumerate() {
                    let last = *chain.last().unwrap();
                    let comp = &sheaf_map.components[last];
                    let so = sn.offsets[p as usize][ci];
                    let to = tn.offsets[p as usize][ci];
                    for r in 0..comp.matrix.rows() {
                        for c in 0..comp.matrix.cols() {
                            if !comp.matrix.get(r, c).is_zero() {
                                m.set(t_off + to + r, s_off + so + c, comp.matrix.get(r, c).clone());
                            }
                        }
                    }
                }
            }
            GroupHom::new(s_term, t_term, m)
        },
    )
}

/// The pushforward model along f: degree n has value C^n(f⁻¹(U_y), F) at y,
/// restrictions are chain-coordinate projections.
pub fn pushforward_model(f: &MonotoneMap, sheaf: &Sheaf) -> SheafComplex {
    assert_eq!(sheaf.poset, f.source);
    let q = &f.target;
    // per element of Q: the fiber subposet and its nerve
    let fibers: Vec<Vec<usize>> = (0..q.len()).map(|y| f.fiber_upset(y)).collect();
    let nerves: Vec<NerveComplex> = fibers
        .iter()
        .map(|idx| {
            let sub = f.source.subposet(idx);
            let restricted = sheaf.restrict_to(idx);
            nerve_complex(&sub, &restricted)
        })
        .collect();
    let max_height = nerves
        .iter()
        .filter_map(|n| n.complex.support())
        .map(|(_, hi)| hi)
        .max()
        .unwrap_or(-1);
    if max_height < 0 {
        // all fibers empty
        let zero = crate::site::constant_sheaf(q, &FpAbGroup::zero());
        return SheafComplex::concentrated(zero, 0);
    }
    // translate chains to global element indices for projection lookup
    let global_chains: Vec<Vec<Vec<Vec<usize>>>> = (0..q.len())
        .map(|y| {
            nerves[y]
                .chains
                .iter()
                .map(|per_deg| {
                    per_deg
                        .iter()
                        .map(|c| c.iter().map(|&i| fibers[y][i]).collect())
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut sheaves = Vec::new();
    for n in 0..=max_height as usize {
        let stalks: Vec<FpAbGroup> = (0..q.len()).map(|y| nerves[y].complex.term(n as i64)).collect();
        let mut restrictions = BTreeMap::new();
        for y in 0..q.len() {
            for y2 in 0..q.len() {
                if !q.leq(y, y2) {
                    continue;
                }
                // chains over y2 are a subset of chains over y
                let mut m = IntMatrix::zero(stalks[y2].ambient_rank(), stalks[y].ambient_rank());
                if n < global_chains[y2].len() {
                    for (ti, tc) in global_chains[y2][n].iter().enumerate() {
                        let si = global_chains[y][n]
                            .iter()
                            .position(|c| c == tc)
                            .expect("fiber chains nest along restrictions");
                        let t_off = nerves[y2].offsets[n][ti];
                        let s_off = nerves[y].offsets[n][si];
                        let w = sheaf.stalk(*tc.last().unwrap()).ambient_rank();
                        for r in 0..w {
                            m.set(t_off + r, s_off + r, BigInt::from(1));
                        }
                    }
                }
                restrictions.insert((y, y2), GroupHom::new(stalks[y].clone(), stalks[y2].clone(), m));
            }
        }
        sheaves.push(Sheaf::new(q.clone(), stalks, restrictions));
    }
    let mut diffs = Vec::new();
    for n in 0..max_height as usize {
        let components: Vec<GroupHom> = (0..q.len())
            .map(|y| nerves[y].complex.differential(n as i64))
            .collect();
        diffs.push(SheafHom::new(sheaves[n].clone(), sheaves[n + 1].clone(), components));
    }
    SheafComplex::new(0, sheaves, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::{constant_sheaf, global_sections, random_sheaf, RandomSheafParams};

    fn inv(g: &FpAbGroup) -> Vec<i64> {
        g.invariant_factors()
            .iter()
            .map(|d| i64::try_from(d.clone()).unwrap())
            .collect()
    }

    fn table(poset: &Poset, sheaf: &Sheaf) -> Vec<(i64, Vec<i64>)> {
        cohomology_table(poset, sheaf)
            .into_iter()
            .map(|(n, fs)| (n, fs.into_iter().map(|d| i64::try_from(d).unwrap()).collect()))
            .collect()
    }

    #[test]
    fn point_nerve() {
        let pt = Poset::point();
        let g = FpAbGroup::cyclic(6);
        let f = constant_sheaf(&pt, &g);
        let n = nerve_complex(&pt, &f);
        assert_eq!(n.complex.support(), Some((0, 0)));
        assert!(cohomology(&n.complex, 0).group.is_isomorphic(&g));
    }

    #[test]
    fn circle_fixture() {
        let pc4 = Poset::pc4();
        let f = constant_sheaf(&pc4, &FpAbGroup::free(1));
        let n = nerve_complex(&pc4, &f);
        assert_eq!(n.complex.term(0).ambient_rank(), 4);
        assert_eq!(n.complex.term(1).ambient_rank(), 4);
        assert_eq!(table(&pc4, &f), vec![(0, vec![0]), (1, vec![0])]);

        let f4 = constant_sheaf(&pc4, &FpAbGroup::cyclic(4));
        assert_eq!(table(&pc4, &f4), vec![(0, vec![4]), (1, vec![4])]);
    }

    #[test]
    fn sphere_fixture() {
        let ss6 = Poset::ss6();
        let f = constant_sheaf(&ss6, &FpAbGroup::free(1));
        assert_eq!(table(&ss6, &f), vec![(0, vec![0]), (1, vec![]), (2, vec![0])]);
        // Euler characteristic: 6 - 12 + 8 = 2 matches rank alternation 1 - 0 + 1
    }

    #[test]
    fn empty_poset() {
        let f = constant_sheaf(&Poset::empty(), &FpAbGroup::free(1));
        let n = nerve_complex(&Poset::empty(), &f);
        assert!(n.complex.is_empty());
        assert!(sheaf_cohomology(&Poset::empty(), &f, 0).group.is_trivial());
    }

    #[test]
    fn minimum_gives_acyclicity() {
        let chain = Poset::chain(3);
        for seed in 0..10 {
            let f = random_sheaf(&chain, seed, RandomSheafParams { summands: 2, quotient: seed % 2 == 0 });
            let t = cohomology_table(&chain, &f);
            assert!(t[0].1.iter().eq(sheaf_cohomology(&chain, &f, 0).group.invariant_factors()));
            assert!(sheaf_cohomology(&chain, &f, 0).group.is_isomorphic(f.stalk(0)));
            for (n, fs) in &t[1..] {
                assert!(fs.is_empty(), "H^{n} nonzero on a poset with minimum");
            }
        }
    }

    #[test]
    fn h0_is_global_sections() {
        for seed in 0..10 {
            let poset = if seed % 2 == 0 { Poset::pc4() } else { Poset::ss6() };
            let f = random_sheaf(&poset, seed, RandomSheafParams { summands: 2, quotient: seed % 3 == 0 });
            let (gs, _) = global_sections(&f);
            assert!(sheaf_cohomology(&poset, &f, 0).group.is_isomorphic(&gs));
        }
    }

    #[test]
    fn hyper_nerve_of_concentrated_sheaf() {
        let pc4 = Poset::pc4();
        let f = constant_sheaf(&pc4, &FpAbGroup::cyclic(4));
        let k = SheafComplex::concentrated(f.clone(), 0);
        let tot = hyper_nerve(&pc4, &k);
        let direct = nerve_complex(&pc4, &f);
        let t1 = tot.complex.cohomology_table();
        let t2 = direct.complex.cohomology_table();
        assert_eq!(t1, t2);
    }

    #[test]
    fn hyper_nerve_of_derived_tensor() {
        let pc4 = Poset::pc4();
        let f = constant_sheaf(&pc4, &FpAbGroup::cyclic(4));
        let k = crate::site::sheaf_derived_tensor(&f, &FpAbGroup::cyclic(2));
        let tot = hyper_nerve(&pc4, &k);
        let t = tot.complex.cohomology_table();
        // classical UCT from H^*(PC4, Z/4) = (Z/4, Z/4) with A = Z/2:
        // H^r = H^r⊗A ⊕ Tor(H^{r+1}, A), so (Z/2, (Z/2)^2, Z/2) in degrees -1..1
        let expect: Vec<(i64, Vec<i64>)> = vec![(-1, vec![2]), (0, vec![2, 2]), (1, vec![2])];
        let got: Vec<(i64, Vec<i64>)> = t
            .into_iter()
            .map(|(n, fs)| (n, fs.into_iter().map(|d| i64::try_from(d).unwrap()).collect()))
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn pushforward_to_point_recovers_nerve() {
        let pc4 = Poset::pc4();
        let f = constant_sheaf(&pc4, &FpAbGroup::free(1));
        let to_pt = MonotoneMap::new(pc4.clone(), Poset::point(), vec![0; 4]).unwrap();
        let pf = pushforward_model(&to_pt, &f);
        let stalk = pf.stalk_complex(0);
        let direct = nerve_complex(&pc4, &f);
        assert_eq!(stalk.cohomology_table(), direct.complex.cohomology_table());
    }

    #[test]
    fn pushforward_identity_of_point() {
        let pt = Poset::point();
        let f = constant_sheaf(&pt, &FpAbGroup::cyclic(3));
        let pf = pushforward_model(&MonotoneMap::identity(&pt), &f);
        assert_eq!(pf.lo, 0);
        assert!(pf.stalk_complex(0).term(0).is_isomorphic(f.stalk(0)));
    }

    #[test]
    fn pushforward_to_chain() {
        let pc4 = Poset::pc4();
        let chain = Poset::chain(2);
        let f = constant_sheaf(&pc4, &FpAbGroup::cyclic(4));
        let map = MonotoneMap::new(pc4.clone(), chain.clone(), vec![0, 0, 1, 1]).unwrap();
        let pf = pushforward_model(&map, &f);
        // stalk at 0: all of PC4
        let c0 = pf.stalk_complex(0);
        assert_eq!(
            c0.cohomology_table(),
            nerve_complex(&pc4, &f).complex.cohomology_table()
        );
        // stalk at 1: the {c, d} antichain, so F(c) ⊕ F(d) in degree 0
        let c1 = pf.stalk_complex(1);
        assert_eq!(c1.support(), Some((0, 0)));
        assert_eq!(inv(&cohomology(&c1, 0).group), vec![4, 4]);
        // stalk complexes agree with nerve of the fiber subposet on every element
        for y in 0..chain.len() {
            let fiber = map.fiber_upset(y);
            let sub = pc4.subposet(&fiber);
            let direct = nerve_complex(&sub, &f.restrict_to(&fiber));
            assert_eq!(
                pf.stalk_complex(y).cohomology_table(),
                direct.complex.cohomology_table()
            );
        }
    }
}
