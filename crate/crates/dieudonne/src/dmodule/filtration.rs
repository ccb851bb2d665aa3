//! Canonical filtration, Ekedahl-Oort sequence and Kraft words.

use std::collections::{HashSet, VecDeque};

use super::words::{primitive_root, WordMultiset};
use super::DModule;
use crate::error::{Error, Result};
use crate::linalg::Subspace;

/// The coarsest flag stable under `N -> F(N)` and `N -> V^{-1}(N)`.
#[derive(Clone, Debug)]
pub struct CanonicalFiltration {
    /// Subspaces sorted by dimension, starting with 0 and ending with M.
    pub steps: Vec<Subspace>,
    /// `f_index[i]` is the index of `F(steps[i])`.
    pub f_index: Vec<usize>,
    /// `v_index[i]` is the index of `V^{-1}(steps[i])`.
    pub v_index: Vec<usize>,
    /// Degree over the input field at which the flag became a chain.
    pub extension_degree: u32,
}

impl CanonicalFiltration {
    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(Subspace::dim).collect()
    }

    /// `psi(d) = dim F(M_d)` on the final refinement, for `d = 0..=n`.
    pub fn final_sequence(&self) -> Vec<usize> {
        let n = self.steps.last().map_or(0, Subspace::dim);
        let mut psi = vec![0; n + 1];
        for j in 1..self.steps.len() {
            let lo = self.steps[j - 1].dim();
            let hi = self.steps[j].dim();
            let f_lo = self.steps[self.f_index[j - 1]].dim();
            let f_hi = self.steps[self.f_index[j]].dim();
            for d in lo + 1..=hi {
                psi[d] = if f_hi > f_lo { f_lo + (d - lo) } else { f_lo };
            }
        }
        psi
    }
}

fn closure(m: &DModule) -> Vec<Subspace> {
    let zero = Subspace::zero(&m.field, m.n);
    let full = Subspace::full(&m.field, m.n);
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut queue = VecDeque::new();
    for s in [zero, full] {
        if seen.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for t in [m.f_image(&s), m.v_preimage(&s)] {
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    let mut steps: Vec<Subspace> = seen.into_iter().collect();
    steps.sort_by(|a, b| {
        a.dim()
            .cmp(&b.dim())
            .then_with(|| a.basis().cmp(&b.basis()))
    });
    steps
}

fn is_chain(steps: &[Subspace]) -> bool {
    steps
        .windows(2)
        .all(|w| w[0].dim() < w[1].dim() && w[1].contains_space(&w[0]))
}

impl DModule {
    /// Canonical filtration of a local-local BT1 module.
    pub fn canonical_filtration(&self) -> Result<CanonicalFiltration> {
        if !self.is_local_local() || !self.is_bt1() {
            return Err(Error::Invalid(
                "canonical filtration needs a local-local BT1 module".into(),
            ));
        }
        let mut s = 1u32;
        loop {
            let m = self.extend_scalars(s)?;
            let steps = closure(&m);
            if is_chain(&steps) {
                let index = |t: &Subspace| steps.iter().position(|x| x == t).expect("closed set");
                let f_index = steps.iter().map(|x| index(&m.f_image(x))).collect();
                let v_index = steps.iter().map(|x| index(&m.v_preimage(x))).collect();
                return Ok(CanonicalFiltration {
                    steps,
                    f_index,
                    v_index,
                    extension_degree: s,
                });
            }
            s *= 2;
            if s as usize > 2 * self.n.max(1) {
                return Err(Error::Bound(
                    "canonical filtration did not become a chain".into(),
                ));
            }
        }
    }

    fn ll_part_for_types(&self) -> Result<DModule> {
        if self.is_local_local() {
            Ok(self.clone())
        } else {
            self.local_local()
        }
    }

    /// Elementary sequence `[psi_1, ..., psi_g]`, `g = n/2`, of the
    /// local-local part.
    pub fn eo_sequence(&self) -> Result<Vec<usize>> {
        let ll = self.ll_part_for_types()?;
        if ll.n == 0 {
            return Ok(Vec::new());
        }
        let cf = ll.canonical_filtration()?;
        let psi = cf.final_sequence();
        Ok(psi[1..=ll.n / 2].to_vec())
    }

    /// Kraft words of the local-local part from the block permutation.
    pub fn kraft_words(&self) -> Result<WordMultiset> {
        let ll = self.ll_part_for_types()?;
        let mut out = WordMultiset::new();
        if ll.n == 0 {
            return Ok(out);
        }
        let cf = ll.canonical_filtration()?;
        let t = cf.steps.len() - 1;
        let dim = |i: usize| cf.steps[i].dim();
        // block j is steps[j-1] < steps[j]
        let mut label = vec!['v'; t + 1];
        let mut next = vec![0usize; t + 1];
        for j in 1..=t {
            let (a, b) = (cf.f_index[j - 1], cf.f_index[j]);
            if dim(b) > dim(a) {
                label[j] = 'f';
                next[j] = b;
            } else {
                next[j] = cf.v_index[j];
            }
            let target = next[j];
            if target == 0 || dim(target) - dim(target - 1) != dim(j) - dim(j - 1) {
                return Err(Error::Invariant(
                    "block permutation is not well defined".into(),
                ));
            }
        }
        let mut visited = vec![false; t + 1];
        for start in 1..=t {
            if visited[start] {
                continue;
            }
            let mut labels = String::new();
            let mut j = start;
            while !visited[j] {
                visited[j] = true;
                labels.push(label[j]);
                j = next[j];
            }
            if j != start {
                return Err(Error::Invariant("block map is not a permutation".into()));
            }
            let word: String = labels.chars().rev().collect();
            let (root, k) = primitive_root(&word);
            let block = dim(start) - dim(start - 1);
            *out.0.entry(root).or_insert(0) += k * block;
        }
        Ok(out)
    }
}

/// Elementary sequence axioms: `psi_1 in {0,1}`, steps of 0 or 1.
pub fn is_elementary_sequence(psi: &[usize]) -> bool {
    let mut prev = 0usize;
    psi.iter().all(|&x| {
        let ok = x == prev || x == prev + 1;
        prev = x;
        ok
    })
}

#[cfg(test)]
mod tests {
    use super::super::{module_from_eo, module_from_words};
    use super::*;
    use crate::field::Field;

    #[test]
    fn superspecial_filtration() {
        let k = Field::prime(3).unwrap();
        let m = module_from_words(&WordMultiset::parse("fv:3").unwrap(), &k);
        let cf = m.canonical_filtration().unwrap();
        assert_eq!(cf.dims(), vec![0, 3, 6]);
        assert_eq!(cf.steps[1], m.ker_f());
        assert_eq!(m.eo_sequence().unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn ffvv_filtration() {
        let k = Field::prime(5).unwrap();
        let m = module_from_words(&WordMultiset::parse("ffvv:1").unwrap(), &k);
        let cf = m.canonical_filtration().unwrap();
        assert_eq!(cf.dims(), vec![0, 1, 2, 3, 4]);
        let f1 = m.f_image(&Subspace::full(&k, 4));
        let f2 = m.f_image(&f1);
        assert_eq!(cf.steps[1], f2);
        assert_eq!(cf.steps[2], f1);
        assert_eq!(cf.steps[3], m.v_preimage(&f2));
        assert_eq!(m.eo_sequence().unwrap(), vec![0, 1]);
    }

    #[test]
    fn eo_roundtrip_length_three() {
        let k = Field::prime(3).unwrap();
        for psi in [[0, 0, 0], [0, 0, 1], [0, 1, 1], [0, 1, 2]] {
            let m = module_from_eo(&psi, &k).unwrap();
            assert_eq!(m.eo_sequence().unwrap(), psi.to_vec());
        }
    }
}

#[cfg(test)]
mod roundtrip {
    use super::super::module_from_words;
    use super::*;
    use crate::field::Field;

    fn primitive_words(max: usize) -> Vec<String> {
        let mut out = Vec::new();
        for len in 2..=max {
            for bits in 0..(1u32 << len) {
                let w: String = (0..len)
                    .map(|i| if bits >> i & 1 == 0 { 'f' } else { 'v' })
                    .collect();
                if !w.contains('f') || !w.contains('v') {
                    continue;
                }
                let (root, k) = primitive_root(&w);
                if k == 1 && root == w {
                    out.push(w);
                }
            }
        }
        out
    }

    #[test]
    fn words_roundtrip_small() {
        let k = Field::prime(3).unwrap();
        let ws = primitive_words(6);
        for a in &ws {
            for b in &ws {
                if a.len() + b.len() > 9 {
                    continue;
                }
                let mut m = WordMultiset::new();
                m.add(a, 1).unwrap();
                m.add(b, 1).unwrap();
                let got = module_from_words(&m, &k).kraft_words().unwrap();
                assert_eq!(got, m, "{a} {b}");
            }
        }
    }
}
