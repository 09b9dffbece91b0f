mod common;

use stabext_core::workbench::corpus::{load_manifest, parse_provenance};
use stabext_core::workbench::{default_corpus_dir, evaluate_claims, fixtures, load_corpus, RunParams};

#[test]
fn on_disk_corpus_matches_the_generator() {
    let corpus = load_corpus(&default_corpus_dir()).unwrap();
    let generated = fixtures::corpus_entries().unwrap();
    assert_eq!(corpus.entries.len(), generated.len());
    for (disk, gen) in corpus.entries.iter().zip(&generated) {
        assert_eq!(disk.name, gen.name);
        assert_eq!(disk.algebra.presentation(), gen.algebra.presentation(), "{}", disk.name);
        assert_eq!(disk.modules.len(), gen.modules.len(), "{}", disk.name);
        for (a, b) in disk.modules.iter().zip(&gen.modules) {
            assert_eq!(a.name(), b.name());
            assert!(a.same_action(b), "{}: module {:?} differs", disk.name, a.name());
        }
        assert_eq!(disk.stress, gen.stress);
        assert_eq!(disk.component_root, gen.component_root);
        assert_eq!(disk.shift_pair, gen.shift_pair);
        assert_eq!(
            disk.selection.as_ref().map(|s| serde_json::to_value(s).unwrap()),
            gen.selection.as_ref().map(|s| serde_json::to_value(s).unwrap())
        );
    }
}

#[test]
fn every_claim_is_reproduced() {
    let corpus = load_corpus(&default_corpus_dir()).unwrap();
    let params = RunParams::default();
    for e in &corpus.entries {
        assert!(!e.claims.is_empty(), "{} has no claims", e.name);
        for rec in evaluate_claims(e, &params) {
            assert!(rec.passed(), "{}: {} {:?} {}", rec.entry, rec.name, rec.reason, rec.evidence);
        }
    }
}

#[test]
fn derived_claims_agree_with_the_oracles() {
    let dir = default_corpus_dir();
    let manifest = load_manifest(&dir).unwrap();
    let corpus = load_corpus(&dir).unwrap();
    let mut checked = 0;
    for e in &corpus.entries {
        for c in &e.claims {
            let tag = parse_provenance(&c.provenance, &manifest).unwrap();
            if !manifest.oracle_required.contains(&tag.kind) {
                continue;
            }
            let module = |n: &Option<String>| e.module(n.as_deref().unwrap()).unwrap();
            match c.check.as_str() {
                "ext_hat" if c.degree.unwrap() >= 1 => {
                    let i = c.degree.unwrap() as usize;
                    let dims = common::ext_dims(module(&c.module), module(&c.target), i);
                    assert_eq!(serde_json::json!(dims[i - 1]), c.expect, "{}: {}", e.name, c.id);
                    checked += 1;
                }
                "stable_endo" => {
                    let m = module(&c.module);
                    assert_eq!(serde_json::json!(common::stable_hom_dim(m, m)), c.expect, "{}: {}", e.name, c.id);
                    checked += 1;
                }
                _ => {}
            }
        }
    }
    assert!(checked >= 15, "only {checked} claims reached an oracle");
}

#[test]
fn oracle_knows_the_dual_numbers() {
    // k over k[x]/(x^2): every Ext^i(k, k) is one-dimensional.
    let a = fixtures::truncated_polynomial(2, 2);
    let k = fixtures::truncated_module(&a, 1);
    assert_eq!(common::ext_dims(&k, &k, 4), vec![1, 1, 1, 1]);
    assert_eq!(common::stable_hom_dim(&k, &k), 1);
    assert_eq!(common::stable_hom_dim(&a.regular_module(), &k), 0);
}
