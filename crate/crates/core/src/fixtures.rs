//! Small built-in instances: the Canadian electoral-reform discussion, the
//! undefendable-argument example, the two axiom counterexamples, and a
//! score-level table without an underlying AF.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::absaf::{Absaf, Ballot, BallotFormat, Election};
use crate::af::{parse_af, Af, Format};
use crate::bitset::ArgSet;
use crate::rules::ScoreMatrix;

pub const CANADA_APX: &str = "\
% Canadian electoral-reform discussion
arg(p1). arg(f1). arg(p2). arg(f2). arg(p3). arg(s1). arg(m1). arg(s2).
att(f1,p1).
att(f1,p2). att(p2,f1).
att(f2,p3). att(p3,f2).
att(m1,s1).
att(m1,s2). att(s2,m1).
";

pub const CANADA_BALLOTS: &str = "\
33 : p1
31 : p1,p2,p3
16 : p2
16 : p3
11 : f2
10 : p2,p3
9 : p1,p3
9 : f2,p1
8 : p1,p2
7 : f2,p1,p2,p3
6 : s2
4 : f1,f2
4 : p1,p2,p3,m1,s1
3 : f1
3 : f2,p2,p3
2 : f2,p1,p3
2 : f1,p1
2 : f2,p1,p2
2 : p1,p2,p3,s1
1 : p2,m1
1 : s1
1 : m1
1 : f2,p3
1 : p2,p3,s2
1 : f1,f2,p3
1 : p2,s1
1 : p1,p2,p3,s1,s2
1 : f1,p1,p2,p3
";

pub fn canada_af() -> Af {
    parse_af(CANADA_APX, Format::Apx).expect("fixture parses")
}

/// 187 voters over the Canadian AF.
pub fn canada_absaf() -> Absaf {
    Absaf::from_text(canada_af(), CANADA_BALLOTS, BallotFormat::Text).expect("fixture parses")
}

fn build(labels: &[&str], attacks: &[(&str, &str)], ballots: &[&[&str]]) -> Absaf {
    let af = Af::from_labels(labels, attacks).expect("fixture AF");
    let ballots = ballots.iter().map(|b| Ballot::single(af.set_of(b.iter().copied()).unwrap())).collect();
    Absaf::new(af, ballots).expect("fixture ballots")
}

/// `b`,`c` attack each other; `f` attacks `d`, `e` and itself. Voter 1
/// approves `{a,b}`, voter 2 approves `{a,c,d,e}`.
pub fn undefended_absaf() -> Absaf {
    build(
        &["a", "b", "c", "d", "e", "f"],
        &[("b", "c"), ("c", "b"), ("f", "d"), ("f", "e"), ("f", "f")],
        &[&["a", "b"], &["a", "c", "d", "e"]],
    )
}

/// Three preferred extensions `{a,c}`, `{a,d}`, `{a,e}`; no size-2 outcome
/// satisfies SJR.
pub fn sjr_counterexample() -> Absaf {
    build(
        &["a", "b", "c", "d", "e"],
        &[
            ("a", "b"),
            ("b", "c"),
            ("b", "d"),
            ("b", "e"),
            ("c", "d"),
            ("c", "e"),
            ("d", "c"),
            ("d", "e"),
            ("e", "c"),
            ("e", "d"),
        ],
        &[&["a"], &["a", "c"], &["a", "d"], &["a", "e"]],
    )
}

/// Extensions `{a,b,c,d}`, `{a,b,c,e,f,g,h}`, `{a,b,c,e,i,j,k}`; every OWA
/// rule picks the last two at `k = 2`, which violates JR.
pub fn jr_counterexample() -> Absaf {
    let mut attacks = vec![("d", "e"), ("e", "d")];
    for t in ["f", "g", "h", "i", "j", "k"] {
        attacks.push(("d", t));
    }
    for x in ["f", "g", "h"] {
        for y in ["i", "j", "k"] {
            attacks.push((x, y));
            attacks.push((y, x));
        }
    }
    build(
        &["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k"],
        &attacks,
        &[&["a", "b", "c", "d"], &["a", "b", "c", "d"], &["e", "f", "g", "h"], &["e", "i", "j", "k"]],
    )
}

/// Four voters, three extensions, representation given directly:
/// `π1 = (0,1,1,1)`, `π2 = (0.4,0.5,1,1)`, `π3 = (0.5,0.5,0.5,0.5)`.
pub fn score_table() -> ScoreMatrix {
    let r = Rational64::new;
    ScoreMatrix::from_rows(vec![
        vec![r(0, 1), r(1, 1), r(1, 1), r(1, 1)],
        vec![r(2, 5), r(1, 2), r(1, 1), r(1, 1)],
        vec![r(1, 2), r(1, 2), r(1, 2), r(1, 2)],
    ])
    .expect("fixture scores")
}

/// A seeded random AF on `n_args` arguments with `n_voters` single ballots.
/// Attack density and ballot sizes vary with the seed.
pub fn random_absaf(seed: u64, n_args: usize, n_voters: usize) -> Absaf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = rng.random_range(0.05..0.35);
    let mut attacks = Vec::new();
    for a in 0..n_args {
        for b in 0..n_args {
            if rng.random_bool(density) && (a != b || rng.random_bool(0.3)) {
                attacks.push((a, b));
            }
        }
    }
    let af = Af::new((0..n_args).map(|i| format!("a{i}")), attacks).expect("valid AF");
    let ballots = (0..n_voters)
        .map(|_| {
            let size = rng.random_range(1..=n_args.min(4));
            let mut s = ArgSet::empty(n_args);
            while s.len() < size {
                s.insert(rng.random_range(0..n_args));
            }
            Ballot::single(s)
        })
        .collect();
    Absaf::new(af, ballots).expect("valid ballots")
}

pub fn random_election(seed: u64, n_args: usize, n_voters: usize) -> Election {
    Election::new(random_absaf(seed, n_args, n_voters)).expect("small AF enumerates")
}
