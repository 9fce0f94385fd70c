use opbar::barcobar::reduced_bar;
use opbar::exactla::{homology, Ring};
use opbar::opalg::{ass, com, load_str, save_string, Structure};
use std::path::PathBuf;

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("OPBAR_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{name} differs from the stored export");
}

#[test]
fn bar_of_com_arity_4() {
    let b = reduced_bar(&com(Ring::Int, 4).unwrap(), 4).unwrap();
    golden("bar_com_4.txt", &b.export_text());
    golden("bar_com_4_homology.txt", &homology(b.complex()).unwrap().export_text());
}

#[test]
fn bar_of_ass_arity_4() {
    let b = reduced_bar(&ass(Ring::Int, 4).unwrap(), 4).unwrap();
    golden("bar_ass_4.txt", &b.export_text());
    golden("bar_ass_4_homology.txt", &homology(b.complex()).unwrap().export_text());
}

#[test]
fn exports_are_deterministic() {
    let a = ass(Ring::Int, 4).unwrap();
    assert_eq!(reduced_bar(&a, 4).unwrap().export_text(), reduced_bar(&a, 4).unwrap().export_text());
}

#[test]
fn structure_files_of_com_and_ass() {
    for (name, p) in [("com_4.operad", com(Ring::Int, 4).unwrap()), ("ass_4.operad", ass(Ring::Int, 4).unwrap())] {
        let s = Structure::Operad(p);
        let text = save_string(&s);
        golden(name, &text);
        assert_eq!(load_str(&text).unwrap(), s);
    }
}
