use super::*;
use crate::theoryzoo::{Element, Family};

const WORLD: &str = "world w { atoms: a b; edges: r1 = {a b}; }";

fn errors(src: &str) -> Vec<Diagnostic> {
    parse(src).expect_err("expected a parse failure")
}

#[test]
fn minimal_world() {
    let doc = parse(WORLD).unwrap();
    assert_eq!(doc.worlds.len(), 1);
    assert_eq!(doc.worlds[0].atoms.len(), 2);
    assert_eq!(doc.worlds[0].edges.len(), 1);
}

#[test]
fn theory_binds_to_world() {
    let doc = parse(&format!("{WORLD}\ntheory t : materialism {{ world: w; Q: edges(r1); }}")).unwrap();
    let t = &doc.theories[0];
    assert_eq!(t.family, Family::Materialism);
    assert_eq!(t.world.text, "w");
    let inst = doc.theory_instance("t").unwrap();
    assert_eq!(inst.mental, vec![Element::Edge("r1".into())]);
    assert!(check(&doc).is_empty());
}

#[test]
fn unresolved_atom_is_located() {
    let src = "world w {\n  atoms: a b;\n  edges: r1 = {a missing};\n}";
    let d = errors(src);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].code, "E003");
    assert_eq!(d[0].message, "unresolved atom 'missing'");
    assert_eq!((d[0].span.start.line, d[0].span.start.column), (3, 18));
    assert_eq!(&src[d[0].span.start.offset..d[0].span.end.offset], "missing");
}

#[test]
fn recovery_reports_several_errors() {
    let src = "world w { atoms: a b; edges: r1 = {a b} r2 = ; attr r1: phi = x; }\n\
               map F { a -> ; b -> a; }\n\
               experiment e { N = 10; gamma = 2; }";
    let d = errors(src);
    let lines: Vec<usize> = d.iter().map(|d| d.span.start.line).collect();
    assert_eq!(d.len(), 4, "{d:#?}");
    assert_eq!(lines, vec![1, 1, 2, 3]);
    assert!(d.iter().all(|d| d.code == "E002"));
}

#[test]
fn unclosed_block_does_not_swallow_next_declaration() {
    let src = "world w { atoms: a;\nworld v { atoms: ; }";
    let d = errors(src);
    assert!(d.iter().any(|d| d.message.contains("'}' before the next declaration")));
    assert!(d.iter().any(|d| d.span.start.line == 2 && d.message.contains("atom name")));
}

#[test]
fn duplicates_are_reported() {
    let d = errors("world w { atoms: a a; }\nworld w { atoms: b; }");
    assert_eq!(d.len(), 2);
    assert!(d.iter().all(|d| d.code == "E004"));
    let d = errors(&format!("{WORLD}\nmap F {{ a -> b; a -> a; }}"));
    assert_eq!(d[0].code, "E004");
}

#[test]
fn empty_document_serializes_to_empty_text() {
    let doc = parse("  # nothing\n").unwrap();
    assert!(doc.is_empty());
    assert_eq!(serialize(&doc), "");
}

#[test]
fn round_trip_is_canonical() {
    let src = "experiment e { seed = 7; N = 100; alpha = 10;; beta = 2; }\n\
               world w { atoms: c a b; edges: r2 = (b a) r1 = {c a}; attr r1: phi = 0.25; attr r2: phi = -1e-3; }\n\
               theory d : interactionist_dualism { world: w; mental: b a; material: c; links: (c a) (b c); }\n\
               theory i : iit { world: w; tau: 0.1; phi: phi; }\n\
               map G { a -> b; }\n\
               concepts k { x = {3 1}; y = {2 1}; xy = {1 2 3}; compose xy = x + y; }";
    let doc = parse(src).unwrap();
    let text = serialize(&doc);
    let again = parse(&text).unwrap();
    assert_eq!(again, doc);
    assert_eq!(serialize(&again), text);
    assert!(text.ends_with("}\n"));
    assert!(text.contains("  edges:\n    r2 = (b a)\n    r1 = {a c};\n"));
    assert!(text.contains("experiment e {\n  N = 100;\n  alpha = 10;\n  beta = 2;\n  seed = 7;\n}"));
    assert!(text.contains("  x = {1 3};"));
    assert!(text.contains("  mental: a b;"));
}

#[test]
fn panpsychism_with_restricted_q_warns() {
    let doc = parse(&format!("{WORLD}\ntheory p : panpsychism {{ world: w; Q: none; }}")).unwrap();
    let d = check(&doc);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].severity, Severity::Warning);
    assert!(d[0].message.contains("panpsychism requires Q true for all r"));
}

#[test]
fn naive_dualism_overlap_is_an_error() {
    let doc = parse(&format!("{WORLD}\ntheory d : dualism {{ world: w; mental: a; material: a b; }}")).unwrap();
    let d = check(&doc);
    assert_eq!(d.len(), 1);
    assert!(d[0].is_error());
    assert!(d[0].message.contains("intersection of M and I has no members"));
}

#[test]
fn missing_and_foreign_parameters() {
    let doc = parse(&format!("{WORLD}\ntheory m : materialism {{ world: w; tau: 1; }}")).unwrap();
    let codes: Vec<&str> = check(&doc).iter().map(|d| d.code).collect();
    assert_eq!(codes, vec!["E101", "E102"]);
}

#[test]
fn experiment_ranges() {
    let doc = parse("experiment e { N = 100; alpha = 10; beta = 20; }").unwrap();
    let d = check(&doc);
    assert_eq!(d.len(), 1);
    assert!(d[0].message.contains("beta = 20 exceeds alpha = 10"));
    let cfg = parse("experiment e { N = 100; alpha = 10; beta = 2; trials = 5; }")
        .unwrap()
        .experiment("e")
        .unwrap();
    assert_eq!(cfg.params.alpha, 10);
    assert_eq!(cfg.trials, Some(5));
    assert_eq!(cfg.seed, None);
}

#[test]
fn negative_and_fractional_integers_are_rejected() {
    let d = errors("experiment e { N = -1; alpha = 2.5; }");
    assert_eq!(d.len(), 2);
    assert!(d.iter().all(|d| d.code == "E005"));
}

#[test]
fn invalid_utf8_is_located() {
    let d = parse_bytes(b"world w {\n \xff }").unwrap_err();
    assert_eq!(d[0].code, "E001");
    assert_eq!((d[0].span.start.line, d[0].span.start.column), (2, 2));
}

#[test]
fn concept_table_builds_a_space() {
    let doc = parse("concepts c { x = {1 2}; y = {2 3}; xy = {1 2 3}; compose xy = x + y; }").unwrap();
    let space = doc.concept_space("c").unwrap();
    assert_eq!(space.neuron_count(), 4);
    assert_eq!(space.compositions().len(), 1);
    assert!(check(&doc).is_empty());
}
