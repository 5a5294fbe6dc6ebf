use crate::sineprod::gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FareyFrac {
    pub h: i64,
    pub k: i64,
}

impl FareyFrac {
    pub fn new(h: i64, k: i64) -> Option<Self> {
        (k >= 1 && h >= 0 && h < k && gcd(h, k) == 1).then_some(FareyFrac { h, k })
    }
}

impl std::fmt::Display for FareyFrac {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.h, self.k)
    }
}

/// Farey fractions of order n in [0,1), ordered by k then h.
pub fn farey(n: i64) -> Vec<FareyFrac> {
    let mut out = Vec::new();
    for k in 1..=n {
        for h in 0..k {
            if let Some(f) = FareyFrac::new(h, k) {
                out.push(f);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetTag {
    A,
    B(i64),
    C,
    Cprime,
    /// the part of C outside C′
    Cstar,
    D,
    E,
}

impl SubsetTag {
    /// Membership of h/k in the subset of the Farey fractions of order n.
    pub fn contains(&self, h: i64, k: i64, n: i64) -> bool {
        if FareyFrac::new(h, k).is_none() || k > n {
            return false;
        }
        let upper_half = 2 * k > n;
        let third = 3 * k > n && 2 * k <= n;
        let ends = h == 1 || h == k - 1;
        let odd = k % 2 == 1;
        match *self {
            SubsetTag::A => upper_half && ends,
            SubsetTag::C => upper_half && odd && (h == 2 || h == k - 2),
            SubsetTag::Cprime => 3 * k > 2 * n && odd && (h == 2 || h == k - 2),
            SubsetTag::Cstar => upper_half && 3 * k <= 2 * n && odd && (h == 2 || h == k - 2),
            SubsetTag::D => upper_half && odd && (2 * h == k - 1 || 2 * h == k + 1),
            SubsetTag::E => third && ends,
            SubsetTag::B(big_k) => {
                if k < big_k {
                    return false;
                }
                let r = |x: i64| x.rem_euclid(k);
                let pm = |a: i64| h == r(a) || h == r(-a);
                if third && pm(1) {
                    return false;
                }
                if upper_half && (pm(1) || pm(2) || (odd && pm((k + 1) / 2))) {
                    return false;
                }
                true
            }
        }
    }

    /// Members in ascending (k, h) order.
    pub fn members(&self, n: i64) -> Vec<FareyFrac> {
        let lo = match *self {
            SubsetTag::A | SubsetTag::C | SubsetTag::Cstar | SubsetTag::D => n / 2 + 1,
            SubsetTag::Cprime => 2 * n / 3 + 1,
            SubsetTag::E => n / 3 + 1,
            SubsetTag::B(big_k) => big_k.max(1),
        };
        let mut out = Vec::new();
        for k in lo..=n {
            for h in 0..k {
                if self.contains(h, k, n) {
                    out.push(FareyFrac { h, k });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farey_counts() {
        // |F_N| = Σ_{k≤N} φ(k)
        let phi = |k: i64| (1..=k).filter(|&h| gcd(h, k) == 1).count();
        for n in 1..12 {
            let want: usize = (1..=n).map(phi).sum();
            assert_eq!(farey(n).len(), want);
        }
        assert_eq!(farey(3), vec![
            FareyFrac { h: 0, k: 1 },
            FareyFrac { h: 1, k: 2 },
            FareyFrac { h: 1, k: 3 },
            FareyFrac { h: 2, k: 3 }
        ]);
    }

    #[test]
    fn subsets() {
        let n = 20;
        assert_eq!(SubsetTag::A.members(n).len(), 20);
        assert!(SubsetTag::C.contains(2, 13, n));
        assert!(SubsetTag::C.contains(11, 13, n));
        assert!(!SubsetTag::C.contains(2, 9, n));
        assert!(SubsetTag::D.contains(6, 13, n) && SubsetTag::D.contains(7, 13, n));
        assert!(SubsetTag::E.contains(1, 7, n) && SubsetTag::E.contains(6, 7, n));
        assert!(!SubsetTag::E.contains(1, 6, n));
        assert!(SubsetTag::Cprime.contains(2, 15, n) && !SubsetTag::Cprime.contains(2, 13, n));
        // C = C′ ⊔ C*
        for k in 1..=n {
            for h in 0..k {
                let (c, cp, cs) = (SubsetTag::C.contains(h, k, n), SubsetTag::Cprime.contains(h, k, n), SubsetTag::Cstar.contains(h, k, n));
                assert_eq!(c, cp || cs);
                assert!(!(cp && cs));
            }
        }
        // ℬ(101,N) is empty below 101
        for n in [60, 80, 100] {
            assert!(SubsetTag::B(101).members(n).is_empty());
        }
    }

    #[test]
    fn partition_of_upper_farey() {
        // F_N − (F_100 ∪ A) = B(101) ∪ C ∪ D ∪ E, disjointly
        let n = 260;
        for f in farey(n).into_iter().filter(|f| f.k > 100) {
            let tags = [SubsetTag::B(101), SubsetTag::C, SubsetTag::D, SubsetTag::E, SubsetTag::A];
            let hits = tags.iter().filter(|t| t.contains(f.h, f.k, n)).count();
            assert_eq!(hits, 1, "{f}");
        }
    }
}
