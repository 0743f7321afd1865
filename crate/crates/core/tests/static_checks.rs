mod common;

use common::{program, seeded};
use diaplan::cli::check_all;
use diaplan::dsl::parse_program;
use diaplan::ViolationKind;

#[test]
fn shipped_programs_pass() {
    for name in ["list.dp", "coloring.dp"] {
        let r = check_all(&program(name));
        assert!(r.is_empty(), "{name}: {r}");
    }
}

#[test]
fn each_seeded_violation_gives_one_targeted_diagnostic() {
    for (seed, kind) in [
        ("non-linear pattern", ViolationKind::NonLinearPattern),
        ("unbound replacement variable", ViolationKind::UnboundReplacementVariable),
        ("private method call", ViolationKind::PrivateMethodCall),
        ("arity-wrong call", ViolationKind::Signature),
    ] {
        let r = check_all(&parse_program(&seeded(seed)).unwrap());
        let errors: Vec<_> = r.errors().collect();
        assert_eq!(errors.len(), 1, "{seed}: {r}");
        assert_eq!(errors[0].kind, kind, "{seed}: {r}");
    }
}

#[test]
fn foreign_frame_access_is_reported() {
    let src = format!(
        "{}\nsignature {{ points a b; call peekAll(a, b); frame List(a, b); }};\n\
         pred peekAll(2) {{ rule {{ pattern {{ call peekAll(a, b); frame List(a, b) = {{ points p q; var L(p, q) : L<I>; }}; }} \
         => {{ frame List(a, b) = {{ points p q; var L(p, q); }}; }} }} otherwise fail; }}",
        common::program_text("list.dp")
    );
    let r = check_all(&parse_program(&src).unwrap());
    assert_eq!(r.count(ViolationKind::FrameAccessOutsideClass), 1, "{r}");
}

#[test]
fn ill_shaped_graphs_are_reported() {
    let src = format!(
        "{}\ngraph bad {{ frame List(h, t) = {{ points a b; edge (a, b); }}; }}",
        common::program_text("list.dp")
    );
    let r = check_all(&parse_program(&src).unwrap());
    assert_eq!(r.count(ViolationKind::FrameContentsShape), 1, "{r}");
}

#[test]
fn ill_shaped_replacements_are_reported() {
    let src = common::program_text("list.dp").replace(
        "=> { frame List(a, b) = { points p q; var L(p, q); }; }",
        "=> { frame List(a, b) = { points p q; var L(p, q); edge (p, q); }; }",
    );
    let r = check_all(&parse_program(&src).unwrap());
    assert_eq!(r.count(ViolationKind::ReplacementShape), 1, "{r}");
}

#[test]
fn untyped_variables_in_frames_are_reported() {
    let src = common::program_text("list.dp").replace("var L(x, q) : L<I>;", "var L(x, q);");
    let r = check_all(&parse_program(&src).unwrap());
    assert_eq!(r.count(ViolationKind::UntypedVariable), 1, "{r}");
}
