//! Closure operators on finite lattices, their meet-closed systems of fixed
//! points, and abstract consequence relations.

use crate::error::{Error, Result};
use crate::laws::LawReport;
use crate::module::FiniteModule;
use crate::quantale::FiniteLattice;

/// Largest lattice accepted by the exhaustive enumerations here.
pub const CLOSURE_ENUMERATION_BOUND: usize = 8;

fn check_bound(lat: &FiniteLattice) -> Result<()> {
    if lat.size() > CLOSURE_ENUMERATION_BOUND {
        return Err(Error::SizeBound(format!(
            "closure enumeration is limited to {CLOSURE_ENUMERATION_BOUND} elements"
        )));
    }
    Ok(())
}

pub fn is_closure_operator(lat: &FiniteLattice, g: &[usize]) -> bool {
    let n = lat.size();
    g.len() == n
        && g.iter().all(|&v| v < n)
        && (0..n).all(|x| lat.leq(x, g[x]) && g[g[x]] == g[x])
        && (0..n).all(|x| (0..n).all(|y| !lat.leq(x, y) || lat.leq(g[x], g[y])))
}

/// All closure operators, found by walking every extensive map.
pub fn enumerate_closure_operators(lat: &FiniteLattice) -> Result<Vec<Vec<usize>>> {
    check_bound(lat)?;
    let n = lat.size();
    let ups: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&y| lat.leq(x, y)).collect()).collect();
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, lat: &FiniteLattice, ups: &[Vec<usize>], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            if is_closure_operator(lat, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for &y in &ups[i] {
            // prune: monotonicity against already fixed smaller indices
            if (0..i).all(|x| {
                (!lat.leq(x, i) || lat.leq(cur[x], y)) && (!lat.leq(i, x) || lat.leq(y, cur[x]))
            }) {
                cur[i] = y;
                rec(i + 1, lat, ups, cur, out);
            }
        }
    }
    rec(0, lat, &ups, &mut cur, &mut out);
    Ok(out)
}

/// Subsets (as sorted element lists) closed under binary meets and
/// containing `⊤`.
pub fn enumerate_meet_closed(lat: &FiniteLattice) -> Result<Vec<Vec<usize>>> {
    check_bound(lat)?;
    let n = lat.size();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask >> lat.top() & 1 == 0 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
        if members
            .iter()
            .all(|&x| members.iter().all(|&y| mask >> lat.meet(x, y) & 1 == 1))
        {
            out.push(members);
        }
    }
    Ok(out)
}

/// `γ_S(x) = ⋀{y ∈ S | x ≤ y}`.
pub fn closure_of_system(lat: &FiniteLattice, s: &[usize]) -> Vec<usize> {
    (0..lat.size())
        .map(|x| lat.meet_all(s.iter().copied().filter(|&y| lat.leq(x, y))))
        .collect()
}

pub fn fixed_points(g: &[usize]) -> Vec<usize> {
    (0..g.len()).filter(|&x| g[x] == x).collect()
}

/// The closure operators matched with their systems of fixed points.
#[derive(Clone, Debug)]
pub struct ClosureCorrespondence {
    pub systems: Vec<Vec<usize>>,
    pub operators: Vec<Vec<usize>>,
    /// `pairing[i]` is the index in `operators` of `γ_{systems[i]}`.
    pub pairing: Vec<usize>,
    pub report: LawReport,
}

/// Enumerates both sides and verifies that `S ↦ γ_S` and `γ ↦ Fix(γ)` are
/// mutually inverse and order-reversing.
pub fn closure_meetclosed_bijection(lat: &FiniteLattice) -> Result<ClosureCorrespondence> {
    let systems = enumerate_meet_closed(lat)?;
    let operators = enumerate_closure_operators(lat)?;
    let mut report = LawReport::new();
    report.record(
        "equal cardinalities",
        (systems.len() != operators.len())
            .then(|| format!("{} systems, {} operators", systems.len(), operators.len())),
        1,
    );
    let mut pairing = Vec::with_capacity(systems.len());
    let mut missing = None;
    for s in &systems {
        let g = closure_of_system(lat, s);
        match operators.iter().position(|o| *o == g) {
            Some(i) => pairing.push(i),
            None => {
                missing.get_or_insert_with(|| format!("S={s:?}"));
                pairing.push(usize::MAX);
            }
        }
    }
    report.record("systems give closure operators", missing, systems.len());
    report.check(
        "fixed points recover the system",
        systems.iter(),
        |s| fixed_points(&closure_of_system(lat, s)) == **s,
        |s| format!("S={s:?}"),
    );
    report.check(
        "system of fixed points recovers the operator",
        operators.iter(),
        |g| closure_of_system(lat, &fixed_points(g)) == **g,
        |g| format!("γ={g:?}"),
    );
    let n = lat.size();
    let pointwise_leq = |a: &[usize], b: &[usize]| (0..n).all(|x| lat.leq(a[x], b[x]));
    let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
    let pairs: Vec<(usize, usize)> = (0..systems.len())
        .flat_map(|i| (0..systems.len()).map(move |j| (i, j)))
        .collect();
    report.check(
        "order reversing",
        pairs.iter(),
        |&&(i, j)| {
            let (gi, gj) = (closure_of_system(lat, &systems[i]), closure_of_system(lat, &systems[j]));
            subset(&systems[i], &systems[j]) == pointwise_leq(&gj, &gi)
        },
        |&&(i, j)| format!("S={:?}, T={:?}", systems[i], systems[j]),
    );
    Ok(ClosureCorrespondence {
        systems,
        operators,
        pairing,
        report,
    })
}

// ---------------------------------------------------------------------------
// consequence relations

/// A binary relation `x ⊢ y` on a finite lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConsequenceRelation {
    n: usize,
    rel: Vec<bool>,
}

impl ConsequenceRelation {
    /// Accepts any relation matrix; use [`ConsequenceRelation::validate`] to
    /// check the consequence axioms.
    pub fn from_matrix(n: usize, rel: Vec<bool>) -> Result<Self> {
        if rel.len() != n * n {
            return Err(Error::IndexMismatch {
                expected: n * n,
                found: rel.len(),
            });
        }
        Ok(ConsequenceRelation { n, rel })
    }

    /// `x ⊢_γ y` iff `y ≤ γ(x)`.
    pub fn from_closure(lat: &FiniteLattice, g: &[usize]) -> Self {
        let n = lat.size();
        let rel = (0..n * n).map(|i| lat.leq(i % n, g[i / n])).collect();
        ConsequenceRelation { n, rel }
    }

    pub fn total(n: usize) -> Self {
        ConsequenceRelation {
            n,
            rel: vec![true; n * n],
        }
    }

    #[inline]
    pub fn entails(&self, x: usize, y: usize) -> bool {
        self.rel[x * self.n + y]
    }

    /// Checks `y ≤ x ⇒ x ⊢ y`, transitivity and `x ⊢ ⋁{y | x ⊢ y}`.
    pub fn validate(&self, lat: &FiniteLattice) -> LawReport {
        let n = self.n;
        let mut r = LawReport::new();
        if n != lat.size() {
            r.record("defined on the lattice", Some(format!("{n} vs {}", lat.size())), 1);
            return r;
        }
        r.check(
            "contains the reverse order",
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))),
            |&(x, y)| !lat.leq(y, x) || self.entails(x, y),
            |&(x, y)| format!("x={x}, y={y}"),
        );
        r.check(
            "transitive",
            (0..n).flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z)))),
            |&(x, y, z)| !(self.entails(x, y) && self.entails(y, z)) || self.entails(x, z),
            |&(x, y, z)| format!("x={x}, y={y}, z={z}"),
        );
        r.check(
            "entails the join of its consequences",
            0..n,
            |&x| self.entails(x, self.strongest(lat, x)),
            |&x| format!("x={x}"),
        );
        r
    }

    fn strongest(&self, lat: &FiniteLattice, x: usize) -> usize {
        lat.join_all((0..self.n).filter(|&y| self.entails(x, y)))
    }

    /// `γ_⊢(x) = ⋁{y | x ⊢ y}`.
    pub fn to_closure(&self, lat: &FiniteLattice) -> Result<Vec<usize>> {
        let report = self.validate(lat);
        if let Some(f) = report.failures().next() {
            return Err(Error::InvalidRelation(format!(
                "{} fails at {}",
                f.law,
                f.counterexample.as_deref().unwrap_or("?")
            )));
        }
        Ok((0..self.n).map(|x| self.strongest(lat, x)).collect())
    }

    /// Elements `t` with `t ⊢ y ⇒ y ≤ t`.
    pub fn theories(&self, lat: &FiniteLattice) -> Vec<usize> {
        (0..self.n)
            .filter(|&t| (0..self.n).all(|y| !self.entails(t, y) || lat.leq(y, t)))
            .collect()
    }

    /// `x ⊢ y ⇒ q ⋆ x ⊢ q ⋆ y` for every scalar.
    pub fn is_structural(&self, m: &FiniteModule) -> bool {
        (0..self.n).all(|x| {
            (0..self.n).all(|y| {
                !self.entails(x, y)
                    || (0..m.quantale().size()).all(|a| self.entails(m.act(a, x), m.act(a, y)))
            })
        })
    }
}

/// Round trips `γ ↦ ⊢_γ ↦ γ` and `⊢ ↦ γ_⊢ ↦ ⊢`, and matches theories with
/// fixed points. With a module, structurality of the two sides is compared.
pub fn consequence_closure_roundtrip(
    lat: &FiniteLattice,
    g: &[usize],
    module: Option<&FiniteModule>,
) -> Result<LawReport> {
    let mut r = LawReport::new();
    if !is_closure_operator(lat, g) {
        return Err(Error::InvalidNucleus("not a closure operator".into()));
    }
    let rel = ConsequenceRelation::from_closure(lat, g);
    let rel_report = rel.validate(lat);
    r.absorb("induced relation", rel_report);
    let back = rel.to_closure(lat)?;
    r.record("closure round trip", (back != g).then(|| format!("{back:?} != {g:?}")), 1);
    let again = ConsequenceRelation::from_closure(lat, &back);
    r.record("relation round trip", (again != rel).then(|| "relations differ".to_string()), 1);
    let theories = rel.theories(lat);
    let fixed = fixed_points(g);
    r.record(
        "theories are the fixed points",
        (theories != fixed).then(|| format!("{theories:?} != {fixed:?}")),
        1,
    );
    if let Some(m) = module {
        let n = lat.size();
        let structural_closure = (0..m.quantale().size())
            .all(|a| (0..n).all(|x| m.leq(m.act(a, g[x]), g[m.act(a, x)])));
        let structural_rel = rel.is_structural(m);
        r.record(
            "structurality agrees",
            (structural_closure != structural_rel)
                .then(|| format!("closure {structural_closure}, relation {structural_rel}")),
            1,
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::FiniteQuantale;
    use std::sync::Arc;

    #[test]
    fn small_chains() {
        let c2 = closure_meetclosed_bijection(&FiniteLattice::chain(2)).unwrap();
        assert_eq!(c2.systems, vec![vec![1], vec![0, 1]]);
        assert_eq!(c2.operators.len(), 2);
        assert!(c2.report.all_pass());
        let c3 = closure_meetclosed_bijection(&FiniteLattice::chain(3)).unwrap();
        assert_eq!(c3.systems.len(), 4);
        assert!(c3.report.all_pass(), "{}", c3.report);
    }

    #[test]
    fn top_system_gives_constant_top() {
        let lat = FiniteLattice::chain(4);
        assert_eq!(closure_of_system(&lat, &[3]), vec![3; 4]);
    }

    #[test]
    fn size_bound() {
        let lat = FiniteLattice::chain(9);
        assert!(matches!(enumerate_closure_operators(&lat), Err(Error::SizeBound(_))));
    }

    #[test]
    fn identity_closure_gives_reverse_order() {
        let lat = FiniteLattice::chain(3);
        let rel = ConsequenceRelation::from_closure(&lat, &[0, 1, 2]);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(rel.entails(x, y), y <= x);
            }
        }
    }

    #[test]
    fn total_relation_gives_constant_top() {
        let lat = FiniteLattice::chain(3);
        assert_eq!(ConsequenceRelation::total(3).to_closure(&lat).unwrap(), vec![2, 2, 2]);
    }

    #[test]
    fn non_transitive_relation_is_rejected() {
        let lat = FiniteLattice::chain(3);
        let mut rel = vec![false; 9];
        for x in 0..3 {
            for y in 0..=x {
                rel[x * 3 + y] = true;
            }
        }
        rel[1] = true; // 0 ⊢ 1
        rel[5] = true; // 1 ⊢ 2, but not 0 ⊢ 2
        let r = ConsequenceRelation::from_matrix(3, rel).unwrap();
        assert!(matches!(r.to_closure(&lat), Err(Error::InvalidRelation(_))));
    }

    #[test]
    fn l3_nucleus_relation() {
        let q = Arc::new(FiniteQuantale::lukasiewicz_chain(3).unwrap());
        let m = FiniteModule::over_itself(q);
        let g = [1, 1, 2];
        let rel = ConsequenceRelation::from_closure(m.lattice(), &g);
        assert!(rel.entails(0, 1));
        assert!(!rel.entails(0, 2));
        let r = consequence_closure_roundtrip(m.lattice(), &g, Some(&m)).unwrap();
        assert!(r.all_pass(), "{r}");
    }
}
