use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Finite abelian group in invariant-factor normal form: a chain
/// d_1 | d_2 | ... | d_k with every d_i >= 2. The empty chain is the trivial
/// group. Elements are coordinate vectors modulo the invariant factors;
/// there is no separate element type.
///
/// Because the form is canonical, isomorphism testing is equality of the
/// factor lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    factors: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn new(factors: Vec<BigInt>) -> Result<Self> {
        for d in &factors {
            if *d < BigInt::from(2) {
                return Err(Error::InvalidInvariants(format!(
                    "invariant factor {d} is below 2"
                )));
            }
        }
        for w in factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::InvalidInvariants(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic group order must be positive");
        if n == 1 {
            FinAbGroup::trivial()
        } else {
            FinAbGroup {
                factors: vec![BigInt::from(n)],
            }
        }
    }

    /// Normalize an arbitrary list of moduli (each >= 1) into invariant-factor
    /// form by repeated gcd/lcm exchanges; the product is preserved.
    pub fn canonical_from(moduli: Vec<BigInt>) -> Result<Self> {
        let mut v: Vec<BigInt> = Vec::new();
        for m in moduli {
            if m < BigInt::one() {
                return Err(Error::InvalidInvariants(format!(
                    "modulus {m} is not positive"
                )));
            }
            if !m.is_one() {
                v.push(m);
            }
        }
        loop {
            v.sort();
            let mut changed = false;
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    if (&v[j] % &v[i]).is_zero() {
                        continue;
                    }
                    let g = v[i].gcd(&v[j]);
                    let l = &v[i] / &g * &v[j];
                    v[i] = g;
                    v[j] = l;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        v.retain(|d| !d.is_one());
        FinAbGroup::new(v)
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Number of generators in the canonical presentation.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product::<BigInt>().max(BigInt::one())
    }

    /// Largest invariant factor; 1 for the trivial group.
    pub fn exponent(&self) -> BigInt {
        self.factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Reduce a coordinate vector into the canonical range [0, d_i).
    pub fn reduce(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            coords.len(),
            self.factors.len(),
            "coordinate length mismatch"
        );
        coords
            .iter()
            .zip(&self.factors)
            .map(|(c, d)| c.mod_floor(d))
            .collect()
    }

    pub fn zero_element(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.factors.len()]
    }

    pub fn is_zero_element(&self, coords: &[BigInt]) -> bool {
        self.reduce(coords).iter().all(|c| c.is_zero())
    }

    /// Direct sum, renormalized to invariant factors.
    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut all = self.factors.clone();
        all.extend(other.factors.iter().cloned());
        FinAbGroup::canonical_from(all).expect("valid factors stay valid")
    }

    /// The l-power-torsion part for a prime l.
    pub fn primary_part(&self, l: &BigInt) -> Result<FinAbGroup> {
        if !is_small_prime(l) {
            return Err(Error::NotPrime(l.to_string()));
        }
        let mut parts = Vec::new();
        for d in &self.factors {
            let mut p = BigInt::one();
            let mut rest = d.clone();
            while (&rest % l).is_zero() {
                rest /= l;
                p *= l;
            }
            if !p.is_one() {
                parts.push(p);
            }
        }
        // l-parts of a divisibility chain form a divisibility chain already
        FinAbGroup::new(parts)
    }

    /// Prime divisors of the group order, ascending.
    pub fn primes(&self) -> Vec<BigInt> {
        let mut primes = Vec::new();
        for d in &self.factors {
            let mut n = d.clone();
            let mut p = BigInt::from(2);
            while &p * &p <= n {
                if (&n % &p).is_zero() {
                    if !primes.contains(&p) {
                        primes.push(p.clone());
                    }
                    while (&n % &p).is_zero() {
                        n /= &p;
                    }
                }
                p += 1;
            }
            if n > BigInt::one() && !primes.contains(&n) {
                primes.push(n);
            }
        }
        primes.sort();
        primes
    }

    /// All group elements as coordinate vectors. Guarded: intended for small
    /// groups (oracle checks and enumerations).
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let order = self.order();
        assert!(
            order <= BigInt::from(1u64 << 20),
            "element enumeration of a group of order {order}"
        );
        let mut out = vec![self.zero_element()];
        for (i, d) in self.factors.iter().enumerate() {
            let mut next = Vec::new();
            for e in &out {
                let mut v = BigInt::zero();
                while &v < d {
                    let mut e2 = e.clone();
                    e2[i] = v.clone();
                    next.push(e2);
                    v += 1;
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Trial-division primality for the small primes this crate works with.
pub fn is_small_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= *n {
        if (n % &p).is_zero() {
            return false;
        }
        p += 1;
    }
    true
}

/// Jordan-Holder length of a finite abelian group: the total number of prime
/// factors of its order, with multiplicity.
pub fn length(g: &FinAbGroup) -> u64 {
    let mut n = g.order();
    let mut count = 0u64;
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        while (&n % &p).is_zero() {
            n /= &p;
            count += 1;
        }
        p += 1;
    }
    if n > BigInt::one() {
        count += 1;
    }
    count
}
