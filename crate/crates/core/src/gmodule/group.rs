use crate::error::{Error, Result};
use std::fmt;

pub const MAX_GROUP_ORDER: usize = 64;

/// Finite group given by its Cayley table. Index 0 is the identity; the
/// group law is checked exhaustively at construction (orders up to 64).
/// Subgroups are plain index subsets.
///
/// Equality compares the table only; the optional generator list is
/// presentation metadata.
#[derive(Clone, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// flat row-major multiplication table: table[a * order + b] = a * b
    table: Vec<usize>,
    inverses: Vec<usize>,
    generators: Option<Vec<usize>>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty multiplication table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::GroupTooLarge(n));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::NotAGroup("table is not square".into()));
            }
            for &e in row {
                if e >= n {
                    return Err(Error::NotAGroup(format!("table entry {e} out of range")));
                }
                flat.push(e);
            }
        }
        Self::from_flat(n, flat, None)
    }

    fn from_flat(n: usize, table: Vec<usize>, generators: Option<Vec<usize>>) -> Result<Self> {
        let mul = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            if mul(0, a) != a || mul(a, 0) != a {
                return Err(Error::NotAGroup(format!(
                    "index 0 is not an identity at element {a}"
                )));
            }
        }
        // rows and columns must be permutations (cancellation)
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                let r = mul(a, b);
                let c = mul(b, a);
                if seen_row[r] || seen_col[c] {
                    return Err(Error::NotAGroup(format!(
                        "cancellation fails at element {a}"
                    )));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverses = vec![0usize; n];
        for a in 0..n {
            let inv = (0..n).find(|&b| mul(a, b) == 0).ok_or_else(|| {
                Error::NotAGroup(format!("element {a} has no inverse"))
            })?;
            if mul(inv, a) != 0 {
                return Err(Error::NotAGroup(format!(
                    "element {a} has mismatched one-sided inverses"
                )));
            }
            inverses[a] = inv;
        }
        Ok(FiniteGroup {
            order: n,
            table,
            inverses,
            generators,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("cyclic group of order 0".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::GroupTooLarge(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push((a + b) % n);
            }
        }
        let gens = if n > 1 { Some(vec![1]) } else { Some(vec![]) };
        Self::from_flat(n, table, gens)
    }

    /// Direct product; the pair (a, b) is encoded as a * |other| + b.
    pub fn product(&self, other: &FiniteGroup) -> Result<Self> {
        let n = self.order * other.order;
        if n > MAX_GROUP_ORDER {
            return Err(Error::GroupTooLarge(n));
        }
        let enc = |a: usize, b: usize| a * other.order + b;
        let mut table = vec![0usize; n * n];
        for a1 in 0..self.order {
            for b1 in 0..other.order {
                for a2 in 0..self.order {
                    for b2 in 0..other.order {
                        table[enc(a1, b1) * n + enc(a2, b2)] =
                            enc(self.mul(a1, a2), other.mul(b1, b2));
                    }
                }
            }
        }
        let mut gens = Vec::new();
        if let (Some(g1), Some(g2)) = (&self.generators, &other.generators) {
            for &g in g1 {
                gens.push(enc(g, 0));
            }
            for &g in g2 {
                gens.push(enc(0, g));
            }
        }
        Self::from_flat(n, table, Some(gens))
    }

    /// Group generated by permutations of {0..deg-1} (the identity must be
    /// reachable; element 0 of the result is the identity permutation).
    pub fn from_permutations(deg: usize, perms: &[Vec<usize>]) -> Result<Self> {
        for p in perms {
            if p.len() != deg {
                return Err(Error::NotAGroup("permutation degree mismatch".into()));
            }
            let mut seen = vec![false; deg];
            for &i in p {
                if i >= deg || seen[i] {
                    return Err(Error::NotAGroup("not a permutation".into()));
                }
                seen[i] = true;
            }
        }
        let id: Vec<usize> = (0..deg).collect();
        let compose =
            |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
        let mut elems: Vec<Vec<usize>> = vec![id];
        let mut frontier = vec![0usize];
        while let Some(idx) = frontier.pop() {
            let cur = elems[idx].clone();
            for p in perms {
                let next = compose(p, &cur);
                if !elems.contains(&next) {
                    if elems.len() >= MAX_GROUP_ORDER {
                        return Err(Error::GroupTooLarge(elems.len() + 1));
                    }
                    elems.push(next);
                    frontier.push(elems.len() - 1);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                let prod = compose(&elems[a], &elems[b]);
                let idx = elems
                    .iter()
                    .position(|e| *e == prod)
                    .ok_or_else(|| Error::NotAGroup("closure is not closed".into()))?;
                table[a * n + b] = idx;
            }
        }
        let gens = perms
            .iter()
            .map(|p| elems.iter().position(|e| e == p).unwrap())
            .collect();
        Self::from_flat(n, table, Some(gens))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn generators(&self) -> Option<&[usize]> {
        self.generators.as_deref()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order).find(|&a| self.element_order(a) == self.order)
    }

    /// Closure of a subset under multiplication; always contains the
    /// identity. Returned sorted.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut frontier: Vec<usize> = vec![0];
        for &g in gens {
            if !in_set[g] {
                in_set[g] = true;
                frontier.push(g);
            }
        }
        while let Some(a) = frontier.pop() {
            for b in 0..self.order {
                if !in_set[b] {
                    continue;
                }
                for x in [self.mul(a, b), self.mul(b, a)] {
                    if !in_set[x] {
                        in_set[x] = true;
                        frontier.push(x);
                    }
                }
            }
        }
        (0..self.order).filter(|&i| in_set[i]).collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        if !elems.contains(&0) || elems.iter().any(|&e| e >= self.order) {
            return false;
        }
        elems
            .iter()
            .all(|&a| elems.iter().all(|&b| elems.contains(&self.mul(a, b))))
    }

    /// The subgroup on the given elements as a group of its own, together
    /// with the embedding list (local index -> ambient element). The local
    /// ordering is ascending, so the identity sits at index 0.
    pub fn subgroup(&self, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let mut sorted: Vec<usize> = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if !self.is_subgroup(&sorted) {
            return Err(Error::NotASubgroup(format!("{sorted:?}")));
        }
        let local = |g: usize| sorted.iter().position(|&x| x == g).unwrap();
        let n = sorted.len();
        let mut table = vec![0usize; n * n];
        for (i, &a) in sorted.iter().enumerate() {
            for (j, &b) in sorted.iter().enumerate() {
                table[i * n + j] = local(self.mul(a, b));
            }
        }
        Ok((FiniteGroup::from_flat(n, table, None)?, sorted))
    }

    /// All cyclic subgroups, deduplicated, each as a sorted element list.
    pub fn cyclic_subgroups(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for a in 0..self.order {
            let sub = self.subgroup_closure(&[a]);
            if !out.contains(&sub) {
                out.push(sub);
            }
        }
        out.sort();
        out
    }

    pub fn is_normal(&self, elems: &[usize]) -> bool {
        if !self.is_subgroup(elems) {
            return false;
        }
        elems.iter().all(|&u| {
            (0..self.order).all(|g| {
                let conj = self.mul(self.mul(g, u), self.inverse(g));
                elems.contains(&conj)
            })
        })
    }

    /// Right cosets U\G as (representatives, coset index of each element).
    /// Each representative is the minimal element of its coset and the coset
    /// of the identity comes first.
    pub fn right_cosets(&self, u_elems: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &u in u_elems {
                coset_of[self.mul(u, g)] = idx;
            }
        }
        (reps, coset_of)
    }

    /// Quotient group by a normal subgroup: the coset group and the
    /// projection (ambient element -> coset index).
    pub fn quotient_by(&self, u_elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(u_elems) {
            return Err(Error::NotNormal(format!("{u_elems:?}")));
        }
        let (reps, coset_of) = self.right_cosets(u_elems);
        let n = reps.len();
        let mut table = vec![0usize; n * n];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * n + j] = coset_of[self.mul(a, b)];
            }
        }
        Ok((FiniteGroup::from_flat(n, table, None)?, coset_of))
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}
