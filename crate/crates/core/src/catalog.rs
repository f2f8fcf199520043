//! A fixed catalog of small presentations over C2, C4, C2×C2, S3 and D4,
//! with fine, elementary and mixed gradings and some equivalent pairs.

use serde::Serialize;

use crate::cocycle::{cohomology_classes, CochainWitness};
use crate::finite_group::{Elem, Group};
use crate::presentation::{Move, Presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingKind {
    /// `r = 1`: every component has dimension at most one.
    Fine,
    /// `H` trivial.
    Elementary,
    Mixed,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub presentation: Presentation,
}

impl CatalogEntry {
    pub fn kind(&self) -> GradingKind {
        let p = &self.presentation;
        if p.subgroup().order() == 1 {
            GradingKind::Elementary
        } else if p.matrix_size() == 1 {
            GradingKind::Fine
        } else {
            GradingKind::Mixed
        }
    }

    /// Name of the ambient group.
    pub fn group_name(&self) -> &'static str {
        self.name.split('/').next().expect("name has a group part")
    }
}

fn build(g: &Group, h: &[Elem], class: usize, tuple: &[Elem]) -> Presentation {
    let sub = g.subgroup_closure(h).expect("valid generators");
    let c = cohomology_classes(&sub.induced_group(g)).swap_remove(class);
    Presentation::new(g.clone(), sub, c, tuple.to_vec()).expect("valid presentation")
}

fn moved(p: &Presentation, moves: &[Move]) -> Presentation {
    p.apply_moves(moves).expect("valid moves")
}

/// The catalog, grouped by ambient group.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let mut add = |name: &'static str, presentation: Presentation| {
        out.push(CatalogEntry { name, presentation })
    };

    let c2 = Group::named("C2").expect("known group");
    add("C2/fine", build(&c2, &[1], 0, &[0]));
    let eg = build(&c2, &[], 0, &[0, 1]);
    add("C2/elem(e,g)", eg.clone());
    add(
        "C2/elem(g,e)",
        moved(&eg, &[Move::Permute { perm: vec![1, 0] }]),
    );
    add("C2/elem(e,e)", build(&c2, &[], 0, &[0, 0]));
    add("C2/mixed(e,e)", build(&c2, &[1], 0, &[0, 0]));
    add("C2/mixed(e,g)", build(&c2, &[1], 0, &[0, 1]));

    let c4 = Group::named("C4").expect("known group");
    add("C4/fine", build(&c4, &[1], 0, &[0]));
    add("C4/mixed(e,g)", build(&c4, &[2], 0, &[0, 1]));
    let e3 = build(&c4, &[], 0, &[0, 1, 2]);
    add("C4/elem(e,g,g2)", e3.clone());
    add("C4/elem(g,g2,g3)", moved(&e3, &[Move::Conjugate { g: 1 }]));
    add("C4/elem(e,e,g2)", build(&c4, &[], 0, &[0, 0, 2]));
    add("C4/elem(e,e,g)", build(&c4, &[], 0, &[0, 0, 1]));
    add("C4/elem(e,g,g)", build(&c4, &[], 0, &[0, 1, 1]));

    // e, b, a, ab
    let v4 = Group::named("C2xC2").expect("known group");
    add("C2xC2/fine", build(&v4, &[1, 2], 0, &[0]));
    let tw = build(&v4, &[1, 2], 1, &[0]);
    add("C2xC2/fine-twisted", tw.clone());
    add(
        "C2xC2/fine-twisted'",
        moved(
            &tw,
            &[Move::CocycleReplace {
                witness: CochainWitness {
                    n: 4,
                    values: vec![0, 1, 2, 3],
                },
            }],
        ),
    );
    add("C2xC2/mixed-twisted(e,e)", build(&v4, &[1, 2], 1, &[0, 0]));
    add("C2xC2/mixed(e,e)", build(&v4, &[1, 2], 0, &[0, 0]));
    add("C2xC2/elem(e,a)", build(&v4, &[], 0, &[0, 2]));
    add("C2xC2/mixed<a>(e,b)", build(&v4, &[2], 0, &[0, 1]));
    add("C2xC2/mixed<b>(e,a)", build(&v4, &[1], 0, &[0, 2]));

    // e, (2 3), (1 2), (1 2 3), (1 3 2), (1 3)
    let s3 = Group::named("S3").expect("known group");
    add("S3/fine<r>", build(&s3, &[3], 0, &[0]));
    let ms = build(&s3, &[2], 0, &[0, 3]);
    add("S3/mixed<s>(e,r)", ms.clone());
    add(
        "S3/mixed<s>(e,r)^r",
        moved(&ms, &[Move::Conjugate { g: 3 }]),
    );
    add("S3/elem(e,s,r)", build(&s3, &[], 0, &[0, 2, 3]));
    add("S3/elem(e,e,r)", build(&s3, &[], 0, &[0, 0, 3]));
    add("S3/elem(e,r,r)", build(&s3, &[], 0, &[0, 3, 3]));

    // e, r, r2, r3, s, sr, sr2, sr3
    let d4 = Group::named("D4").expect("known group");
    add("D4/fine<r2,s>-twisted", build(&d4, &[2, 4], 1, &[0]));
    add("D4/fine<r2,s>", build(&d4, &[2, 4], 0, &[0]));
    add("D4/fine<r>", build(&d4, &[1], 0, &[0]));
    add("D4/mixed<r2>(e,s)", build(&d4, &[2], 0, &[0, 4]));
    add("D4/mixed<s>(e,r2)", build(&d4, &[4], 0, &[0, 2]));
    add("D4/mixed<r>(e,s)", build(&d4, &[1], 0, &[0, 4]));
    add("D4/mixed<r2,s>(e,r)", build(&d4, &[2, 4], 0, &[0, 1]));
    add(
        "D4/mixed<r2,s>-twisted(e,r)",
        build(&d4, &[2, 4], 1, &[0, 1]),
    );
    add("D4/elem(e,r,s)", build(&d4, &[], 0, &[0, 1, 4]));
    out
}
