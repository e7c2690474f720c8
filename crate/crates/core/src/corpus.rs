//! Small named algebras used by tests, the verify suite and the CLI.

use crate::algebra::{Algebra, QuiverPresentation};
use crate::constructions;
use crate::linalg::Fp;

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Linear `A_n`: `1 -> 2 -> ... -> n`, no relations.
pub fn linear_quiver(n: usize) -> QuiverPresentation {
    let mut q = QuiverPresentation::new(names(n), n.max(2));
    for i in 0..n.saturating_sub(1) {
        q.add_arrow(&format!("a{}", i + 1), i, i + 1);
    }
    q
}

pub fn linear(f: Fp, n: usize) -> Algebra {
    Algebra::from_quiver(&linear_quiver(n), f).unwrap()
}

/// `k[x]/(x^n)`.
pub fn truncated_polynomial_quiver(n: usize) -> QuiverPresentation {
    let mut q = QuiverPresentation::new(names(1), n);
    let x = q.add_arrow("x", 0, 0);
    q.relations.push(vec![(1, vec![x; n])]);
    q
}

pub fn dual_numbers(f: Fp) -> Algebra {
    Algebra::from_quiver(&truncated_polynomial_quiver(2), f).unwrap()
}

/// `1 -a-> 2 -b-> 4`, `1 -c-> 3 -d-> 4`, with `b*a = d*c`.
pub fn commutative_square_quiver() -> QuiverPresentation {
    let mut q = QuiverPresentation::new(names(4), 3);
    let a = q.add_arrow("a", 0, 1);
    let b = q.add_arrow("b", 1, 3);
    let c = q.add_arrow("c", 0, 2);
    let d = q.add_arrow("d", 2, 3);
    q.relations.push(vec![(1, vec![a, b]), (-1, vec![c, d])]);
    q
}

pub fn commutative_square(f: Fp) -> Algebra {
    Algebra::from_quiver(&commutative_square_quiver(), f).unwrap()
}

/// Linear `A_n` modulo all paths of length `l`.
pub fn linear_nakayama_quiver(n: usize, l: usize) -> QuiverPresentation {
    let mut q = linear_quiver(n);
    q.truncation = l;
    q.add_all_paths_of_length(l);
    q
}

/// Oriented `n`-cycle modulo all paths of length `l`.
pub fn cyclic_nakayama_quiver(n: usize, l: usize) -> QuiverPresentation {
    let mut q = QuiverPresentation::new(names(n), l);
    for i in 0..n {
        q.add_arrow(&format!("a{}", i + 1), i, (i + 1) % n);
    }
    q.add_all_paths_of_length(l);
    q
}

/// Two arrows `1 => 2`.
pub fn kronecker_quiver() -> QuiverPresentation {
    let mut q = QuiverPresentation::new(names(2), 2);
    q.add_arrow("a", 0, 1);
    q.add_arrow("b", 0, 1);
    q
}

/// `D_4` with all arrows pointing into the centre.
pub fn d4_quiver() -> QuiverPresentation {
    let mut q = QuiverPresentation::new(names(4), 2);
    q.add_arrow("a", 1, 0);
    q.add_arrow("b", 2, 0);
    q.add_arrow("c", 3, 0);
    q
}

/// `k[x,y]/(x^2, y^2, xy - yx)`.
pub fn exterior_like_quiver() -> QuiverPresentation {
    let mut q = QuiverPresentation::new(names(1), 3);
    let x = q.add_arrow("x", 0, 0);
    let y = q.add_arrow("y", 0, 0);
    q.relations.push(vec![(1, vec![x, x])]);
    q.relations.push(vec![(1, vec![y, y])]);
    q.relations.push(vec![(1, vec![x, y]), (-1, vec![y, x])]);
    q
}

/// A loop at 1 followed by an arrow `1 -> 2`, radical square zero.
pub fn loop_then_arrow_quiver() -> QuiverPresentation {
    let mut q = QuiverPresentation::new(names(2), 2);
    q.add_arrow("x", 0, 0);
    q.add_arrow("a", 0, 1);
    q.add_all_paths_of_length(2);
    q
}

/// `1 -a-> 2 -b-> 3` with `b*a = 0`, and a second arrow `1 -c-> 3`.
pub fn zero_relation_triangle_quiver() -> QuiverPresentation {
    let mut q = QuiverPresentation::new(names(3), 2);
    let a = q.add_arrow("a", 0, 1);
    let b = q.add_arrow("b", 1, 2);
    q.add_arrow("c", 0, 2);
    q.relations.push(vec![(1, vec![a, b])]);
    q
}

/// The pinned corpus: name plus presentation (or structure constants).
pub fn pinned(f: Fp) -> Vec<(String, Algebra)> {
    let mut out: Vec<(String, Algebra)> = Vec::new();
    let mut quiver = |name: &str, q: QuiverPresentation| {
        out.push((name.to_string(), Algebra::from_quiver(&q, f).expect("corpus quiver is admissible")));
    };
    quiver("k[x]/x^2", truncated_polynomial_quiver(2));
    quiver("k[x]/x^3", truncated_polynomial_quiver(3));
    for n in 2..=5 {
        quiver(&format!("A{n}"), linear_quiver(n));
    }
    quiver("square", commutative_square_quiver());
    quiver("A3/rad^2", linear_nakayama_quiver(3, 2));
    quiver("A4/rad^3", linear_nakayama_quiver(4, 3));
    quiver("cyclic2/rad^2", cyclic_nakayama_quiver(2, 2));
    quiver("cyclic3/rad^3", cyclic_nakayama_quiver(3, 3));
    quiver("cyclic3/rad^2", cyclic_nakayama_quiver(3, 2));
    quiver("kronecker", kronecker_quiver());
    quiver("D4", d4_quiver());
    quiver("k[x,y]/(x^2,y^2)", exterior_like_quiver());
    quiver("loop-arrow", loop_then_arrow_quiver());
    quiver("triangle", zero_relation_triangle_quiver());
    for n in 1..=3 {
        quiver(&format!("family-{n}"), constructions::example_family(n));
    }
    quiver("tilde-A2", constructions::tilde_quiver(&linear_quiver(2)));
    out.push(("semisimple2".into(), Algebra::semisimple(f, &["1", "2"])));
    out
}

/// The algebras on which global dimension is finite and small.
pub fn finite_gldim(f: Fp) -> Vec<(String, Algebra)> {
    let mut out: Vec<(String, Algebra)> =
        (2..=5).map(|n| (format!("A{n}"), linear(f, n))).collect();
    out.push(("square".into(), commutative_square(f)));
    out.push(("semisimple2".into(), Algebra::semisimple(f, &["1", "2"])));
    out
}
