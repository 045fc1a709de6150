//! Combinatorial number system ranking of fixed-weight bitmasks.
//!
//! A mask with set bits `p_1 < p_2 < ... < p_k` has rank
//! `sum_j C(p_j, j)`, which orders masks colexicographically, the same order
//! produced by stepping with [`next_mask`].

pub const MAX_SITES: usize = 64;

#[derive(Clone, Debug)]
pub struct Ranker {
    sites: usize,
    weight: usize,
    binom: Vec<u64>,
    chunks: usize,
    table: Vec<u64>,
}

fn binomial_table(n: usize) -> Vec<u64> {
    let w = n + 1;
    let mut t = vec![0u64; w * w];
    for i in 0..=n {
        t[i * w] = 1;
        for j in 1..=i {
            t[i * w + j] = t[(i - 1) * w + j - 1] + if j < i { t[(i - 1) * w + j] } else { 0 };
        }
    }
    t
}

/// Exact `C(n, k)` as `u128` (0 when `k > n`).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

impl Ranker {
    pub fn new(sites: usize, weight: usize) -> Self {
        assert!(sites <= MAX_SITES && weight <= sites);
        let binom = binomial_table(MAX_SITES);
        let chunks = sites.div_ceil(8).max(1);
        let mut table = vec![0u64; chunks * (weight + 1) * 256];
        let w = MAX_SITES + 1;
        for c in 0..chunks {
            for ones in 0..=weight {
                for byte in 0..256usize {
                    let mut acc = 0u64;
                    let mut j = ones;
                    for bit in 0..8 {
                        if byte >> bit & 1 == 1 {
                            j += 1;
                            let p = 8 * c + bit;
                            if p < MAX_SITES && j <= MAX_SITES {
                                acc = acc.wrapping_add(binom[p * w + j]);
                            }
                        }
                    }
                    table[(c * (weight + 1) + ones) * 256 + byte] = acc;
                }
            }
        }
        Ranker {
            sites,
            weight,
            binom,
            chunks,
            table,
        }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn dimension(&self) -> usize {
        self.c(self.sites, self.weight) as usize
    }

    #[inline]
    fn c(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.binom[n * (MAX_SITES + 1) + k]
        }
    }

    /// Rank of `mask`, which must have exactly `weight` bits below `sites`.
    #[inline]
    pub fn rank(&self, mask: u64) -> usize {
        debug_assert_eq!(mask.count_ones() as usize, self.weight);
        let mut r = 0u64;
        let mut ones = 0usize;
        for c in 0..self.chunks {
            let byte = (mask >> (8 * c) & 0xff) as usize;
            r += self.table[(c * (self.weight + 1) + ones) * 256 + byte];
            ones += byte.count_ones() as usize;
        }
        r as usize
    }

    /// Rank of `mask` if it has the ranker's weight, else `None`.
    #[inline]
    pub fn try_rank(&self, mask: u64) -> Option<usize> {
        (mask.count_ones() as usize == self.weight).then(|| self.rank(mask))
    }

    pub fn unrank(&self, rank: usize) -> u64 {
        let mut r = rank as u64;
        let mut mask = 0u64;
        let mut p = self.sites;
        for j in (1..=self.weight).rev() {
            p -= 1;
            while self.c(p, j) > r {
                p -= 1;
            }
            mask |= 1 << p;
            r -= self.c(p, j);
        }
        mask
    }
}

/// Next mask with the same popcount in increasing numeric order.
#[inline]
pub fn next_mask(v: u64) -> u64 {
    let t = v | (v.wrapping_sub(1));
    let w = (!t & t.wrapping_add(1)).wrapping_sub(1) >> (v.trailing_zeros() + 1);
    t.wrapping_add(1) | w
}
