use cinorm::cache::{Cache, CacheOutcome};
use cinorm::group::{Element, FiniteGroup, GroupDescriptor, DEFAULT_LIMIT};
use cinorm::norms::{
    commutator_length_in, qk_norm_in, verify_norm_axioms, Axiom, FnNorm, NormTable, SupportNorm, TrivialNorm,
};
use cinorm::par;
use cinorm::rational::int;
use std::collections::BTreeMap;

fn group(s: &str) -> FiniteGroup {
    FiniteGroup::enumerate(&s.parse().unwrap(), DEFAULT_LIMIT).unwrap()
}

#[test]
fn trivial_norm_on_s3_has_six_rows() {
    let t = NormTable::from_norm(&group("sn:3"), &TrivialNorm).unwrap();
    assert_eq!(t.len(), 6);
    assert_eq!(t.to_tsv().lines().filter(|l| !l.starts_with('#')).count(), 6);
    assert!(verify_norm_axioms(&t).passed);
}

#[test]
fn qk_on_a5_has_sixty_rows_and_diameter_in_meta() {
    let g = group("an:5");
    let k = vec![g.descriptor().parse_element("(1 2 3 4 5)").unwrap()];
    let t = qk_norm_in(&g, &k).unwrap();
    assert_eq!(t.len(), 60);
    assert_eq!(t.meta().diameter, int(3));
    let back = NormTable::from_json(&t.to_json()).unwrap();
    assert_eq!(back.to_json(), t.to_json());
}

/// Commutator length by brute force: products of simple commutators,
/// level by level.
fn cl_oracle(g: &FiniteGroup) -> BTreeMap<Element, usize> {
    let comms: Vec<Element> = g.elements().iter().flat_map(|a| g.elements().iter().map(move |b| g.comm(a, b))).collect();
    let mut out = BTreeMap::from([(g.identity(), 0)]);
    let mut frontier = vec![g.identity()];
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for x in &frontier {
            for c in &comms {
                let y = g.mul(x, c);
                if !out.contains_key(&y) {
                    out.insert(y.clone(), level);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    out
}

#[test]
fn commutator_length_matches_brute_force() {
    for s in ["an:5", "sn:4", "sn:5", "bar:sn:3", "slp:2:3"] {
        let g = group(s);
        let cl = commutator_length_in(&g, DEFAULT_LIMIT).unwrap();
        let oracle = cl_oracle(&g);
        assert_eq!(cl.table.len(), oracle.len(), "{s}");
        for (x, v) in &oracle {
            assert_eq!(cl.get(x), Some(int(*v as i64)), "{s} at {x}");
            let f = cl.factorization(x).unwrap();
            assert_eq!(f.len(), *v);
            let prod = f.iter().fold(g.identity(), |acc, (a, b)| g.mul(&acc, &g.comm(a, b)));
            assert_eq!(&prod, x);
        }
    }
    let a5 = commutator_length_in(&group("an:5"), DEFAULT_LIMIT).unwrap();
    assert_eq!(a5.cld(), int(1));
}

#[test]
fn axiom_checker_flags_broken_norms() {
    let g = group("sn:4");
    // the image of 1 under g: not conjugation invariant
    let moved = FnNorm::new("moves-1", |x: &Element| {
        Ok(int(if x.as_perm().unwrap().apply(0) != 0 { 1 } else { 0 }))
    });
    let r = verify_norm_axioms(&NormTable::from_norm(&g, &moved).unwrap());
    assert!(!r.passed);
    assert!(r.violations.iter().any(|v| v.axiom == Axiom::Conjugation));

    let doubled = FnNorm::new("support-squared", |x: &Element| {
        let s = x.as_perm().unwrap().support_size() as i64;
        Ok(int(s * s))
    });
    let r = verify_norm_axioms(&NormTable::from_norm(&g, &doubled).unwrap());
    assert!(r.violations.iter().any(|v| v.axiom == Axiom::Triangle));

    let zero_on_double_transpositions = FnNorm::new("pseudo", |x: &Element| {
        let p = x.as_perm().unwrap();
        Ok(int(if p.is_even() { 0 } else { 1 }))
    });
    let r = verify_norm_axioms(&NormTable::from_norm(&g, &zero_on_double_transpositions).unwrap());
    assert!(!r.passed && r.pseudo_norm);
}

#[test]
fn tables_do_not_depend_on_thread_count() {
    let render = |threads| {
        par::with_threads(threads, || {
            let g = group("sn:6");
            let k = vec![g.descriptor().parse_element("(1 2)(3 4)").unwrap()];
            let d: GroupDescriptor = "an:6".parse().unwrap();
            let cl = commutator_length_in(&group("sn:5"), DEFAULT_LIMIT).unwrap();
            let qk = qk_norm_in(&FiniteGroup::enumerate(&d, DEFAULT_LIMIT).unwrap(), &k).unwrap();
            let sup = NormTable::from_norm(&g, &SupportNorm).unwrap();
            [cl.table.to_json(), qk.to_json(), sup.to_tsv()].concat()
        })
    };
    assert_eq!(render(1), render(4));
}

#[test]
fn cache_hits_are_byte_identical_to_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path(), cinorm::VERSION);
    let g = group("an:5");
    let k = vec![g.descriptor().parse_element("(1 2 3)").unwrap()];
    let key = cache.key(g.descriptor(), "qk", &k);
    let (first, o1) = cache.get_or_compute(&key, || qk_norm_in(&g, &k)).unwrap();
    let (second, o2) = cache.get_or_compute(&key, || panic!("should hit")).unwrap();
    assert_eq!((o1, o2), (CacheOutcome::Miss, CacheOutcome::Hit));
    assert_eq!(first.to_json(), second.to_json());
    assert_eq!(second.to_json(), qk_norm_in(&g, &k).unwrap().to_json());
    assert_ne!(key, cache.key(g.descriptor(), "qk", &[]));
}
