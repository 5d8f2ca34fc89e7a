//! Golden regression over the bundled fixtures. Run with
//! `STARTFLOW_BLESS=1` to regenerate the goldens after an intended change.

use std::fs;
use std::path::{Path, PathBuf};

use startflow::corpus::{verify_corpus, Corpus, Outcome};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn copy_tree(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_tree(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

#[test]
fn goldens_match() {
    let corpus = Corpus::new(fixtures());
    if std::env::var_os("STARTFLOW_BLESS").is_some() {
        let changed = corpus.bless().unwrap();
        eprintln!("blessed {changed} golden file(s)");
    }
    let report = corpus.verify().unwrap();
    assert!(report.passed(), "{report}");
    assert!(report.entries.len() >= 40, "{report}");
}

#[test]
fn every_document_is_filed_correctly() {
    let docs = Corpus::new(fixtures()).documents().unwrap();
    for (path, valid) in docs {
        let src = fs::read_to_string(&path).unwrap();
        assert_eq!(startflow::parse(&src).is_ok(), valid, "{}", path.display());
    }
}

#[test]
fn mutated_label_reports_fmt_diff() {
    let dir = tempfile::tempdir().unwrap();
    copy_tree(&fixtures(), dir.path());
    let caa = dir.path().join("valid/caa.sfw");
    let src = fs::read_to_string(&caa).unwrap();
    fs::write(&caa, src.replace("\"Add certificate\"", "\"Add a certificate\"")).unwrap();

    let report = verify_corpus(dir.path()).unwrap();
    assert!(!report.passed());
    let fmt = report
        .failures()
        .find(|e| e.golden == Path::new("valid/caa.fmt.sfw"))
        .expect("fmt golden flagged");
    let Outcome::Differs(diff) = &fmt.outcome else {
        panic!("expected a diff, got {:?}", fmt.outcome);
    };
    assert!(diff.contains("--- golden/valid/caa.fmt.sfw"), "{diff}");
    assert!(diff.contains("-  button add \"Add certificate\""), "{diff}");
    assert!(diff.contains("+  button add \"Add a certificate\""), "{diff}");
    // the rule fixtures are untouched
    assert!(report.failures().all(|e| e.golden.starts_with("valid")));
}

#[test]
fn misfiled_document_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    copy_tree(&fixtures(), dir.path());
    fs::copy(dir.path().join("valid/clean.sfw"), dir.path().join("invalid/clean.sfw")).unwrap();
    let report = verify_corpus(dir.path()).unwrap();
    assert_eq!(report.misplaced.len(), 1, "{report}");
    assert!(report.misplaced[0].contains("invalid/clean.sfw"));
}
