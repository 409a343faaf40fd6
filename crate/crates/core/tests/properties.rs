#![allow(clippy::needless_range_loop)]

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use tropint::bbs::{bbs_cj, bbs_step, kdv_step, soliton_content, BbsState, KdvState};
use tropint::curve::extract_curve;
use tropint::linalg::Matrix;
use tropint::minplus::{theta_eval, Hnf, PeriodLattice, Term, TropPoly2};
use tropint::rat::{int, rat};
use tropint::Rat;

/// `BᵀB + I` for a small integer `B`.
fn lattice() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|g| {
        prop::collection::vec(prop::collection::vec(-2i64..=2, g), g).prop_map(move |b| {
            (0..g)
                .map(|i| {
                    (0..g)
                        .map(|j| (0..g).map(|k| b[k][i] * b[k][j]).sum::<i64>() + i64::from(i == j))
                        .collect()
                })
                .collect()
        })
    })
}

fn to_lattice(a: &[Vec<i64>]) -> PeriodLattice {
    let rows: Vec<&[i64]> = a.iter().map(Vec::as_slice).collect();
    PeriodLattice::new(Matrix::from_ints(&rows)).unwrap()
}

fn rats(g: usize, max: i64) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(
        (1i64..=4).prop_flat_map(move |d| (-max * d..=max * d, Just(d))),
        g,
    )
    .prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn objective(a: &[Vec<i64>], z: &[Rat], n: &[i64]) -> Rat {
    let g = n.len();
    let mut quad = 0i64;
    for i in 0..g {
        for j in 0..g {
            quad += n[i] * a[i][j] * n[j];
        }
    }
    rat(quad, 2) + n.iter().zip(z).map(|(&k, zi)| int(k) * zi).sum::<Rat>()
}

/// Exhaustive minimum over a box; `Ω ⪰ I` bounds minimizers by `2|Z|_1`.
fn brute(a: &[Vec<i64>], z: &[Rat]) -> (Rat, Vec<Vec<i64>>) {
    let r: i64 = (z.iter().map(|v| v.abs()).sum::<Rat>() * int(2))
        .ceil()
        .to_integer()
        .try_into()
        .unwrap();
    let g = z.len();
    let mut best: Option<(Rat, Vec<Vec<i64>>)> = None;
    let side = (2 * r + 1) as usize;
    for idx in 0..side.pow(g as u32) {
        let n: Vec<i64> = (0..g)
            .map(|i| (idx / side.pow(i as u32) % side) as i64 - r)
            .collect();
        let v = objective(a, z, &n);
        match &mut best {
            Some((b, set)) if v == *b => set.push(n),
            Some((b, _)) if v > *b => {}
            _ => best = Some((v, vec![n])),
        }
    }
    let (v, mut set) = best.unwrap();
    set.sort();
    (v, set)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lattice_and_point(max: i64) -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Rat>)> {
    lattice().prop_flat_map(move |a| {
        let g = a.len();
        (Just(a), rats(g, max))
    })
}

fn bbs_state() -> impl Strategy<Value = BbsState> {
    (3usize..=14)
        .prop_flat_map(|l| prop::collection::vec(0u8..=1, l))
        .prop_filter_map("too many balls", |u| BbsState::new(u).ok())
}

fn kdv_state() -> impl Strategy<Value = KdvState> {
    (3usize..=10)
        .prop_flat_map(|l| prop::collection::vec((0i64..=6, 1i64..=3), l))
        .prop_filter_map("not below L/2", |v| {
            KdvState::new(v.into_iter().map(|(n, d)| rat(n.min(d), d)).collect()).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn theta_matches_exhaustive_search((a, z) in lattice_and_point(1)) {
        let t = theta_eval(&to_lattice(&a), &z).unwrap();
        let (v, set) = brute(&a, &z);
        prop_assert_eq!(t.value, v);
        prop_assert_eq!(t.minimizers, set);
    }

    #[test]
    fn theta_quasi_periodic(
        (a, z) in lattice_and_point(5),
        m in prop::collection::vec(-3i64..=3, 3),
    ) {
        let g = a.len();
        let m = &m[..g];
        let l = to_lattice(&a);
        let shift: Vec<Rat> = (0..g).map(|i| int((0..g).map(|j| a[i][j] * m[j]).sum())).collect();
        let moved: Vec<Rat> = z.iter().zip(&shift).map(|(x, y)| x + y).collect();
        let lhs = theta_eval(&l, &moved).unwrap().value;
        let rhs = theta_eval(&l, &z).unwrap().value - objective(&a, &z, m);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn theta_is_even((a, z) in lattice_and_point(4)) {
        let l = to_lattice(&a);
        let neg: Vec<Rat> = z.iter().map(|v| -v).collect();
        prop_assert_eq!(theta_eval(&l, &z).unwrap().value, theta_eval(&l, &neg).unwrap().value);
    }

    #[test]
    fn torus_reduction((a, z) in lattice_and_point(30), m in prop::collection::vec(-4i64..=4, 3)) {
        let g = a.len();
        let l = to_lattice(&a);
        let p = l.reduce(&z).unwrap();
        // The offset is a lattice vector.
        let diff: Vec<Rat> = z.iter().zip(p.rep()).map(|(x, y)| x - y).collect();
        let coords = l.omega().solve(&diff).unwrap();
        prop_assert!(coords.iter().all(|c| c.is_integer()));
        let again = l.reduce(p.rep()).unwrap();
        prop_assert_eq!(again.rep(), p.rep());
        let moved: Vec<Rat> = (0..g)
            .map(|i| &z[i] + int((0..g).map(|j| a[i][j] * m[j]).sum()))
            .collect();
        let shifted = l.reduce(&moved).unwrap();
        prop_assert_eq!(shifted.rep(), p.rep());
        prop_assert!(p.difference(&p).unwrap().is_zero());
    }

    #[test]
    fn residues_partition_the_quotient(
        rows in (1usize..=3).prop_flat_map(|g| prop::collection::vec(prop::collection::vec(-4i64..=4, g), g))
    ) {
        let g = rows.len();
        let det = Matrix::from_ints(&rows.iter().map(Vec::as_slice).collect::<Vec<_>>())
            .determinant()
            .unwrap();
        prop_assume!(!det.is_zero());
        let h = Hnf::new(&rows).unwrap();
        prop_assert_eq!(Rat::from_integer(h.covolume()), det.abs());
        let res = h.residues(1 << 16).unwrap();
        prop_assert_eq!(Rat::from_integer(res.len().into()), det.abs());
        for r in &res {
            prop_assert_eq!(&h.canonical(r).unwrap(), r);
        }
        // Adding a generator does not change the class.
        if let Some(r) = res.first() {
            for j in 0..g {
                let moved: Vec<i64> = (0..g).map(|i| r[i] + rows[i][j]).collect();
                prop_assert!(h.equivalent(r, &moved).unwrap());
            }
        }
    }

    #[test]
    fn box_ball_conserves_content_and_cj(s in bbs_state()) {
        let (next, _) = bbs_step(&s);
        prop_assert_eq!(next.balls(), s.balls());
        prop_assert_eq!(bbs_cj(&next.to_kdv()), bbs_cj(&s.to_kdv()));
        prop_assert_eq!(kdv_step(&s.to_kdv()).unwrap(), next.to_kdv());
        if !s.is_vacuum() {
            prop_assert_eq!(soliton_content(&next).unwrap(), soliton_content(&s).unwrap());
        }
    }

    #[test]
    fn rational_kdv_conserves_cj(s in kdv_state()) {
        let next = kdv_step(&s).unwrap();
        let sum = |k: &KdvState| k.values().iter().sum::<Rat>();
        prop_assert_eq!(sum(&next), sum(&s));
        prop_assert_eq!(bbs_cj(&next), bbs_cj(&s));
    }

    #[test]
    fn curve_vertices_balance(
        terms in prop::collection::vec((0u32..=3, 0u32..=3, -4i64..=4), 3..7)
    ) {
        let f = TropPoly2::new(terms.iter().map(|&(i, j, c)| Term::new(int(c), i, j)).collect()).unwrap();
        let c = extract_curve(&f);
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        // Exponents of the terms attaining the minimum.
        let achievers = |x: &Rat, y: &Rat| -> Vec<(i64, i64)> {
            let vals: Vec<Rat> = f.terms().iter().map(|t| t.eval(x, y)).collect();
            let m = vals.iter().min().unwrap().clone();
            f.terms().iter().zip(&vals).filter(|(_, v)| **v == m).map(|(t, _)| t.exponent()).collect()
        };
        let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| {
            (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
        };
        for (v, p) in c.vertices().iter().enumerate() {
            let ex = achievers(&p.0, &p.1);
            let spans_plane = ex.iter().any(|&a| ex.iter().any(|&b| cross(ex[0], a, b) != 0));
            prop_assert!(spans_plane, "vertex {:?}", p);
            let (mut sx, mut sy) = (0i64, 0i64);
            for (e, (dx, dy)) in c.star(v) {
                let w = c.edges()[e].weight;
                sx += w * dx;
                sy += w * dy;
            }
            prop_assert_eq!((sx, sy), (0, 0), "vertex {:?}", p);
        }
        for (_, e) in c.compact_edges() {
            let (a, b) = e.endpoints().unwrap();
            let (pa, pb) = (&c.vertices()[a], &c.vertices()[b]);
            let mid = ((&pa.0 + &pb.0) / int(2), (&pa.1 + &pb.1) / int(2));
            let ex = achievers(&mid.0, &mid.1);
            prop_assert!(ex.len() >= 2);
            // Collinear, and orthogonal to the edge.
            let (dx, dy) = e.primitive;
            for &q in &ex {
                prop_assert_eq!((q.0 - ex[0].0) * dx + (q.1 - ex[0].1) * dy, 0);
            }
            let extent = ex
                .iter()
                .flat_map(|a| ex.iter().map(move |b| gcd((a.0 - b.0).abs(), (a.1 - b.1).abs())))
                .max()
                .unwrap();
            prop_assert_eq!(e.weight, extent);
        }
    }
}

#[test]
fn collinear_ties_give_edge_weight() {
    let c = extract_curve(&"min(2Y, 0, Y, X)".parse().unwrap()).unwrap();
    let mut w: Vec<i64> = c.edges().iter().map(|e| e.weight).collect();
    w.sort();
    assert_eq!(w, vec![1, 1, 2]);
    assert_eq!(
        c.is_smooth().certificate.as_deref(),
        Some("edge with weight 2")
    );
}
