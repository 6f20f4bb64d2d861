//! Chevalley bases from a Cartan matrix and the compact real form.
//!
//! Cartan matrices follow the convention `a[i][j] = 2 (α_i, α_j) / (α_i, α_i)`,
//! so row `i` holds the pairings `<α_j, α_i^∨>`. Positive roots are ordered by
//! height, then lexicographically by their simple-root coordinates with larger
//! leading coefficients first (so `α_1 < α_2 < ...` at height one); the
//! structure constants are fixed by declaring `N_{α,β} = p + 1 > 0` on every
//! extraspecial pair and propagating through the standard identities.

use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::{Rational, StructureAlgebra};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// Cartan matrix of a simple type in Bourbaki numbering.
pub fn cartan_matrix(kind: CartanType, rank: usize) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::InvalidParameter(format!("no simple type {kind:?}{rank}"));
    let valid = match kind {
        CartanType::A => rank >= 1,
        CartanType::B => rank >= 2,
        CartanType::C => rank >= 2,
        CartanType::D => rank >= 4,
        CartanType::E => (6..=8).contains(&rank),
        CartanType::F => rank == 4,
        CartanType::G => rank == 2,
    };
    if !valid {
        return Err(bad());
    }
    let mut a = vec![vec![0i64; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match kind {
        CartanType::A => (0..rank - 1).for_each(|i| link(i, i + 1, -1, -1)),
        CartanType::B => {
            (0..rank - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(rank - 2, rank - 1, -1, -2);
        }
        CartanType::C => {
            (0..rank - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(rank - 2, rank - 1, -2, -1);
        }
        CartanType::D => {
            (0..rank - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(rank - 3, rank - 1, -1, -1);
        }
        CartanType::E => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..rank - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        CartanType::F => {
            link(0, 1, -1, -1);
            link(1, 2, -1, -2);
            link(2, 3, -1, -1);
        }
        CartanType::G => link(0, 1, -3, -1),
    }
    Ok(a)
}

/// Root data of a finite-type Cartan matrix.
///
/// Roots are indexed `0..P` (positive, in the fixed total order) and
/// `P..2P` (index `t + P` is `-root(t)`).
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan: Vec<Vec<i64>>,
    /// `(α_i, α_j)`
    form: Vec<Vec<Rational>>,
    positive: Vec<Vec<i64>>,
    lookup: HashMap<Vec<i64>, usize>,
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if pivot != c {
            m.swap(pivot, c);
            det = -det;
        }
        det *= m[c][c];
        for r in (c + 1)..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                let v = m[c][k];
                m[r][k] -= f * v;
            }
        }
    }
    det
}

impl RootSystem {
    pub fn new(cartan: &[Vec<i64>]) -> Result<Self> {
        let r = cartan.len();
        if r == 0 || cartan.iter().any(|row| row.len() != r) {
            return Err(Error::NotFiniteType("matrix must be square and nonempty".into()));
        }
        for i in 0..r {
            if cartan[i][i] != 2 {
                return Err(Error::NotFiniteType(format!("diagonal entry {i} is not 2")));
            }
            for j in 0..r {
                if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::NotFiniteType(format!("bad off-diagonal pair ({i},{j})")));
                }
            }
        }
        // Symmetrize: (α_i, α_i) along spanning trees of each component.
        let mut norms: Vec<Option<Rational>> = vec![None; r];
        for start in 0..r {
            if norms[start].is_some() {
                continue;
            }
            norms[start] = Some(Rational::from_integer(2));
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let ni = norms[i].expect("visited");
                for j in 0..r {
                    if j != i && cartan[i][j] != 0 {
                        let nj = Rational::from_integer(cartan[i][j]) * ni
                            / Rational::from_integer(cartan[j][i]);
                        match norms[j] {
                            None => {
                                norms[j] = Some(nj);
                                stack.push(j);
                            }
                            Some(existing) if existing != nj => {
                                return Err(Error::NotFiniteType("matrix is not symmetrizable".into()));
                            }
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        let norms: Vec<Rational> = norms.into_iter().map(|n| n.expect("all visited")).collect();
        let form: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| Rational::from_integer(cartan[i][j]) * norms[i] / Rational::from_integer(2))
                    .collect()
            })
            .collect();
        for k in 1..=r {
            let minor: Vec<Vec<Rational>> = form[..k].iter().map(|row| row[..k].to_vec()).collect();
            if determinant(minor) <= Rational::zero() {
                return Err(Error::NotFiniteType("symmetrized form is not positive definite".into()));
            }
        }

        // Positive roots by height: β + α_i is a root iff q - <β, α_i^∨> > 0,
        // where q is the length of the downward α_i-string from β.
        let mut positive: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut v = vec![0; r];
                v[i] = 1;
                v
            })
            .collect();
        let mut lookup: HashMap<Vec<i64>, usize> =
            positive.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut level: Vec<Vec<i64>> = positive.clone();
        while !level.is_empty() {
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in &level {
                for i in 0..r {
                    let pairing: i64 = (0..r).map(|j| beta[j] * cartan[i][j]).sum();
                    let mut q = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if lookup.contains_key(&down) {
                            q += 1;
                        } else {
                            break;
                        }
                    }
                    if q - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !lookup.contains_key(&up) && !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
                if positive.len() > 100_000 {
                    return Err(Error::NotFiniteType("root generation does not terminate".into()));
                }
            }
            for v in &next {
                lookup.insert(v.clone(), usize::MAX);
            }
            positive.extend(next.iter().cloned());
            level = next;
        }
        positive.sort_by(|a, b| {
            let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let p = positive.len();
        let mut lookup = HashMap::with_capacity(2 * p);
        for (t, v) in positive.iter().enumerate() {
            lookup.insert(v.clone(), t);
            lookup.insert(v.iter().map(|c| -c).collect(), t + p);
        }
        Ok(Self { cartan: cartan.to_vec(), form, positive, lookup })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Simple-root coordinates of the positive roots in the fixed order.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    /// Simple-root coordinates of root index `t` in `0..2P`.
    pub fn root(&self, t: usize) -> Vec<i64> {
        let p = self.positive.len();
        if t < p {
            self.positive[t].clone()
        } else {
            self.positive[t - p].iter().map(|c| -c).collect()
        }
    }

    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive.last().expect("nonempty")
    }

    fn negate(&self, t: usize) -> usize {
        let p = self.positive.len();
        if t < p {
            t + p
        } else {
            t - p
        }
    }

    fn is_positive(&self, t: usize) -> bool {
        t < self.positive.len()
    }

    fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let (ra, rb) = (self.root(a), self.root(b));
        let s: Vec<i64> = ra.iter().zip(&rb).map(|(x, y)| x + y).collect();
        self.index_of(&s)
    }

    fn ip(&self, a: &[i64], b: &[i64]) -> Rational {
        let r = self.rank();
        let mut acc = Rational::zero();
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                if b[j] != 0 {
                    acc += self.form[i][j] * Rational::from_integer(a[i] * b[j]);
                }
            }
        }
        acc
    }

    fn norm_sq(&self, t: usize) -> Rational {
        let v = self.root(t);
        self.ip(&v, &v)
    }

    /// `<root(t), α_i^∨>`
    fn pairing(&self, t: usize, i: usize) -> i64 {
        let v = self.root(t);
        (0..self.rank()).map(|j| v[j] * self.cartan[i][j]).sum()
    }

    /// Coroot of root `t` in the basis of simple coroots.
    fn coroot(&self, t: usize) -> Vec<Rational> {
        let v = self.root(t);
        let n = self.norm_sq(t);
        (0..self.rank())
            .map(|i| Rational::from_integer(v[i]) * self.form[i][i] / n)
            .collect()
    }
}

/// Chevalley structure constants `N_{α,β}` for every pair of roots whose sum is a root.
struct StructureConstants {
    table: HashMap<(usize, usize), i64>,
}

impl StructureConstants {
    fn get(&self, a: usize, b: usize) -> i64 {
        self.table.get(&(a, b)).copied().unwrap_or(0)
    }
}

fn to_integer(r: Rational, context: &str) -> Result<i64> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::SignConsistency(format!("non-integral constant {r} for {context}")))
    }
}

fn structure_constants(rs: &RootSystem) -> Result<StructureConstants> {
    let p = rs.num_positive();
    let mut pos: HashMap<(usize, usize), i64> = HashMap::new();

    // N for an arbitrary pair, reduced to positive pairs of lower height.
    fn general(rs: &RootSystem, pos: &HashMap<(usize, usize), i64>, a: usize, b: usize) -> Result<Rational> {
        let Some(s) = rs.sum(a, b) else {
            return Ok(Rational::zero());
        };
        let lookup = |x: usize, y: usize| -> Result<Rational> {
            pos.get(&(x, y))
                .map(|&n| Rational::from_integer(n))
                .ok_or_else(|| Error::SignConsistency(format!("missing N({x},{y})")))
        };
        match (rs.is_positive(a), rs.is_positive(b)) {
            (true, true) => lookup(a, b),
            (false, false) => Ok(-general(rs, pos, rs.negate(a), rs.negate(b))?),
            (false, true) => Ok(-general(rs, pos, b, a)?),
            (true, false) => {
                if rs.is_positive(s) {
                    // (a, b, -s) sum to zero; N_{a,b} = -(s,s)/(a,a) N_{-b,s}
                    Ok(-rs.norm_sq(s) / rs.norm_sq(a) * lookup(rs.negate(b), s)?)
                } else {
                    // N_{a,b} = (s,s)/(b,b) N_{-s,a}
                    Ok(rs.norm_sq(s) / rs.norm_sq(b) * lookup(rs.negate(s), a)?)
                }
            }
        }
    }

    for xi in 0..p {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for g in 0..xi {
            let delta: Vec<i64> = rs.positive[xi].iter().zip(&rs.positive[g]).map(|(x, y)| x - y).collect();
            if let Some(d) = rs.index_of(&delta) {
                if rs.is_positive(d) && g < d {
                    pairs.push((g, d));
                }
            }
        }
        let Some(&(alpha, beta)) = pairs.first() else {
            continue; // simple root
        };
        // p: largest k with β - kα a root
        let mut string = 0i64;
        let mut down = rs.positive[beta].clone();
        loop {
            for (c, a) in down.iter_mut().zip(&rs.positive[alpha]) {
                *c -= a;
            }
            if rs.index_of(&down).is_some() {
                string += 1;
            } else {
                break;
            }
        }
        let n_ab = string + 1;
        pos.insert((alpha, beta), n_ab);
        pos.insert((beta, alpha), -n_ab);
        let xi_norm = rs.norm_sq(xi);
        let neg_alpha = rs.negate(alpha);
        let neg_beta = rs.negate(beta);
        for &(gamma, delta) in &pairs[1..] {
            let mut acc = Rational::zero();
            if let Some(da) = rs.sum(delta, neg_alpha) {
                acc += general(rs, &pos, delta, neg_alpha)? * general(rs, &pos, gamma, neg_beta)?
                    / rs.norm_sq(da);
            }
            if let Some(ga) = rs.sum(gamma, neg_alpha) {
                acc += general(rs, &pos, neg_alpha, gamma)? * general(rs, &pos, delta, neg_beta)?
                    / rs.norm_sq(ga);
            }
            let n = to_integer(xi_norm / Rational::from_integer(n_ab) * acc, "special pair")?;
            pos.insert((gamma, delta), n);
            pos.insert((delta, gamma), -n);
        }
    }

    let mut table = HashMap::new();
    for a in 0..2 * p {
        for b in 0..2 * p {
            if rs.sum(a, b).is_some() {
                let n = to_integer(general(rs, &pos, a, b)?, "root pair")?;
                table.insert((a, b), n);
            }
        }
    }
    // Chevalley property |N_{α,β}| = p + 1.
    for (&(a, b), &n) in &table {
        let mut q = 0i64;
        let mut down = rs.root(b);
        let ra = rs.root(a);
        loop {
            for (c, x) in down.iter_mut().zip(&ra) {
                *c -= x;
            }
            if rs.index_of(&down).is_some() {
                q += 1;
            } else {
                break;
            }
        }
        if n.abs() != q + 1 {
            return Err(Error::SignConsistency(format!("|N({a},{b})| = {} but p + 1 = {}", n.abs(), q + 1)));
        }
    }
    Ok(StructureConstants { table })
}

/// Gaussian rational.
#[derive(Clone, Copy, Debug, PartialEq)]
struct GaussRational {
    re: Rational,
    im: Rational,
}

impl GaussRational {
    fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }
    fn imag(im: Rational) -> Self {
        Self { re: Rational::zero(), im }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

/// Role of a compact basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// `i h_k`
    Cartan(usize),
    /// `e_α - e_{-α}` for positive root index `t`
    X(usize),
    /// `i (e_α + e_{-α})`
    Y(usize),
}

/// Compact real form together with the root data used to build it.
#[derive(Clone, Debug)]
pub struct CompactChevalley {
    pub algebra: StructureAlgebra,
    pub roots: RootSystem,
    pub basis: Vec<BasisKind>,
}

/// Builds the compact real form with basis `{i h_k} ∪ {x_α, y_α : α > 0}`.
pub fn chevalley_compact(cartan: &[Vec<i64>]) -> Result<StructureAlgebra> {
    Ok(chevalley_compact_with_roots(cartan)?.algebra)
}

pub fn chevalley_compact_with_roots(cartan: &[Vec<i64>]) -> Result<CompactChevalley> {
    let rs = RootSystem::new(cartan)?;
    let consts = structure_constants(&rs)?;
    let r = rs.rank();
    let p = rs.num_positive();

    // Complex Chevalley basis: 0..r are h_i, r + t is e_{root(t)}.
    let chev_bracket = |a: usize, b: usize| -> Vec<(usize, Rational)> {
        match (a < r, b < r) {
            (true, true) => Vec::new(),
            (true, false) => vec![(b, Rational::from_integer(rs.pairing(b - r, a)))],
            (false, true) => vec![(a, Rational::from_integer(-rs.pairing(a - r, b)))],
            (false, false) => {
                let (ta, tb) = (a - r, b - r);
                if rs.negate(ta) == tb {
                    rs.coroot(ta).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
                } else if let Some(s) = rs.sum(ta, tb) {
                    vec![(r + s, Rational::from_integer(consts.get(ta, tb)))]
                } else {
                    Vec::new()
                }
            }
        }
    };

    let one = Rational::one();
    let mut basis = Vec::with_capacity(r + 2 * p);
    let mut labels = Vec::with_capacity(r + 2 * p);
    let mut expansions: Vec<Vec<(usize, GaussRational)>> = Vec::with_capacity(r + 2 * p);
    for k in 0..r {
        basis.push(BasisKind::Cartan(k));
        labels.push(format!("ih{}", k + 1));
        expansions.push(vec![(k, GaussRational::imag(one))]);
    }
    for t in 0..p {
        let tag = rs.positive[t].iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        basis.push(BasisKind::X(t));
        labels.push(format!("x[{tag}]"));
        expansions.push(vec![(r + t, GaussRational::real(one)), (r + t + p, GaussRational::real(-one))]);
        basis.push(BasisKind::Y(t));
        labels.push(format!("y[{tag}]"));
        expansions.push(vec![(r + t, GaussRational::imag(one)), (r + t + p, GaussRational::imag(one))]);
    }
    // position of x_t in the compact basis
    let x_pos = |t: usize| r + 2 * t;

    let dim = basis.len();
    let complex_dim = r + 2 * p;
    let mut entries = Vec::new();
    let mut acc = vec![GaussRational::real(Rational::zero()); complex_dim];
    for a in 0..dim {
        for b in (a + 1)..dim {
            for &(u, cu) in &expansions[a] {
                for &(v, cv) in &expansions[b] {
                    let s = cu * cv;
                    for (w, n) in chev_bracket(u, v) {
                        acc[w] = acc[w] + s * GaussRational::real(n);
                    }
                }
            }
            // back to compact coordinates
            let mut out: Vec<(usize, Rational)> = Vec::new();
            for k in 0..r {
                let z = acc[k];
                if !z.re.is_zero() {
                    return Err(Error::SignConsistency(format!("bracket ({a},{b}) leaves the compact form")));
                }
                if !z.im.is_zero() {
                    out.push((k, z.im));
                }
            }
            let half = Rational::new(1, 2);
            for t in 0..p {
                let (bp, bm) = (acc[r + t], acc[r + t + p]);
                // s x + t y has e-coefficient s + i t and (-α)-coefficient -s + i t
                let s = (bp - bm) * GaussRational::real(half);
                let y = (bp + bm) * GaussRational::imag(-half);
                if !s.im.is_zero() || !y.im.is_zero() {
                    return Err(Error::SignConsistency(format!("bracket ({a},{b}) leaves the compact form")));
                }
                if !s.re.is_zero() {
                    out.push((x_pos(t), s.re));
                }
                if !y.re.is_zero() {
                    out.push((x_pos(t) + 1, y.re));
                }
            }
            for z in acc.iter_mut() {
                if !z.is_zero() {
                    *z = GaussRational::real(Rational::zero());
                }
            }
            for (c, v) in out {
                entries.push((a, b, c, v));
                entries.push((b, a, c, -v));
            }
        }
    }
    let algebra = StructureAlgebra::from_exact_entries(labels, entries)?;
    let violations = algebra.validate();
    if let Some(first) = violations.first() {
        return Err(Error::SignConsistency(format!("{} violations, first: {first}", violations.len())));
    }
    if !algebra.is_compact() {
        return Err(Error::SignConsistency("resulting real form is not compact".into()));
    }
    Ok(CompactChevalley { algebra, roots: rs, basis })
}
