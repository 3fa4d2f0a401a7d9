//! The files under `fixtures/` are the canonical exports of the catalog.
//! Run with `KANBENCH_WRITE_FIXTURES=1` to regenerate them.

use std::fs;

use kanbench::fixtures::{catalog_documents, fixture_dir};
use kanbench::Document;

#[test]
fn fixtures_match_the_catalog() {
    let write = std::env::var_os("KANBENCH_WRITE_FIXTURES").is_some();
    let dir = fixture_dir();
    if write {
        fs::create_dir_all(&dir).unwrap();
    }
    for (name, doc) in catalog_documents() {
        let path = dir.join(&name);
        let text = doc.to_canonical();
        if write {
            fs::write(&path, &text).unwrap();
            continue;
        }
        let on_disk = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{name} is out of date");
    }
}

#[test]
fn canonical_text_round_trips() {
    for (name, doc) in catalog_documents() {
        let text = doc.to_canonical();
        let parsed = Document::parse(&name, &text).unwrap();
        assert_eq!(parsed.kind(), doc.kind());
        assert_eq!(parsed.to_canonical(), text, "{name}");
    }
}
