use std::f64::consts::PI;

use nalgebra::DMatrix;

use blockheat::grid::BlockGrid;
use blockheat::operator::{BoundaryKind, DiscreteOperator, SchemeSpec, StencilOrder};
use blockheat::symbol::{
    assemble_modal_basis, block_symbols, ibvp_eigenpairs, n6_symbol_table, IbvpMode, ModalBasis, Split,
};

const CS: [f64; 4] = [0.0, -0.25, 1.0 / 6.0, -1.0 / 6.0];

fn dense_spectrum(op: &DiscreteOperator) -> (Vec<f64>, f64) {
    let ev = op.to_dense().complex_eigenvalues();
    let max_imag = ev.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let mut re: Vec<f64> = ev.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    (re, max_imag)
}

fn assert_multiset_eq(a: &[f64], b: &[f64], rel: f64, what: &str) {
    assert_eq!(a.len(), b.len(), "{what}");
    let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= rel * scale, "{what}: {x} vs {y}");
    }
}

#[test]
fn periodic_dense_spectrum_matches_symbols() {
    for stencil in [StencilOrder::SecondBlock, StencilOrder::FourthBlock] {
        for blocks in [6, 16] {
            for c in CS.into_iter().chain([4.0 / 13.0]) {
                let grid = BlockGrid::periodic(blocks, 2.0 * PI).unwrap();
                let op = DiscreteOperator::periodic(&grid, SchemeSpec::new(stencil, BoundaryKind::Periodic, c).unwrap())
                    .unwrap();
                let (dense, imag) = dense_spectrum(&op);
                let basis = assemble_modal_basis(stencil, blocks, 2.0 * PI, c, Split::PeriodicHalf).unwrap();
                let mut sym = basis.eigenvalues();
                sym.sort_by(f64::total_cmp);
                assert_multiset_eq(&dense, &sym, 1e-8, &format!("{stencil:?} N={blocks} c={c}"));
                if c < 0.5 && stencil == StencilOrder::SecondBlock {
                    let scale = 1.0 / (grid.s() * grid.s());
                    assert!(imag < 1e-8 * scale);
                    assert!(dense.iter().all(|&v| v <= 1e-9 * scale));
                }
            }
        }
    }
}

#[test]
fn ibvp_dense_spectrum_matches_reflected_symbols() {
    for stencil in [StencilOrder::SecondBlock, StencilOrder::FourthBlock] {
        for bc in [BoundaryKind::Dirichlet, BoundaryKind::Neumann] {
            for c in CS {
                let grid = BlockGrid::ibvp(8, PI).unwrap();
                let op = DiscreteOperator::new(&grid, SchemeSpec::new(stencil, bc, c).unwrap()).unwrap();
                let (dense, _) = dense_spectrum(&op);
                let mut predicted: Vec<f64> = ibvp_eigenpairs(stencil, 8, PI, c, bc)
                    .unwrap()
                    .iter()
                    .map(|p| p.value)
                    .collect();
                predicted.sort_by(f64::total_cmp);
                assert_multiset_eq(&dense, &predicted, 1e-8, &format!("{stencil:?} {bc:?} c={c}"));
            }
        }
    }
}

#[test]
fn table_matches_dense_eigensolve() {
    let table = n6_symbol_table(-0.25);
    for (bc, pick) in [
        (BoundaryKind::Dirichlet, 0usize),
        (BoundaryKind::Neumann, 1usize),
    ] {
        let grid = BlockGrid::ibvp(6, PI).unwrap();
        let op = DiscreteOperator::new(&grid, SchemeSpec::new(StencilOrder::SecondBlock, bc, -0.25).unwrap()).unwrap();
        let (dense, _) = dense_spectrum(&op);
        let mut listed: Vec<f64> = table
            .rows
            .iter()
            .flat_map(|r| if pick == 0 { r.dirichlet.clone() } else { r.neumann.clone() })
            .collect();
        listed.sort_by(f64::total_cmp);
        assert_multiset_eq(&dense, &listed, 1e-8, &format!("{bc:?}"));
    }
    // the reflected periodic operator on [-π, π) with 24 points, built by hand
    let s = BlockGrid::ibvp(6, PI).unwrap().s();
    let n = 24usize;
    let mut q = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for (o, w) in StencilOrder::SecondBlock.interior_weights(-0.25, i % 2 == 0) {
            let j = (i as isize + o).rem_euclid(n as isize) as usize;
            q[(i, j)] += w / (s * s);
        }
    }
    let mut dense: Vec<f64> = q.complex_eigenvalues().iter().map(|z| z.re).collect();
    dense.sort_by(f64::total_cmp);
    assert_multiset_eq(&dense, &table.periodic, 1e-8, "periodic");
}

#[test]
fn dirichlet_and_neumann_share_interior_frequencies() {
    let t = n6_symbol_table(-0.25);
    for row in &t.rows[1..6] {
        assert_eq!(row.dirichlet, row.neumann);
        assert_eq!(row.dirichlet.len(), 2);
    }
    assert_ne!(t.rows[0].dirichlet, t.rows[0].neumann);
    assert_ne!(t.rows[6].dirichlet, t.rows[6].neumann);
}

#[test]
fn special_modes() {
    let d = ibvp_eigenpairs(StencilOrder::SecondBlock, 6, PI, -0.25, BoundaryKind::Dirichlet).unwrap();
    assert_eq!(d.len(), 12);
    assert_eq!(d[0].mode, IbvpMode::Alternating);
    assert!((d[0].value + 87.5415).abs() < 5e-5);
    assert_eq!(d[11].mode, IbvpMode::SinHalf);
    let nm = ibvp_eigenpairs(StencilOrder::SecondBlock, 6, PI, -0.25, BoundaryKind::Neumann).unwrap();
    assert_eq!(nm[0].mode, IbvpMode::Constant);
    assert_eq!(nm[0].value, 0.0);
    let first = nm[0].vector[0];
    assert!(nm[0].vector.iter().all(|v| (v - first).abs() < 1e-15));
    assert!((nm[11].value + 43.7708).abs() < 5e-5);
}

#[test]
fn modal_norm_bounds() {
    for blocks in [6, 16, 32] {
        for c in CS {
            let b = assemble_modal_basis(StencilOrder::SecondBlock, blocks, 2.0 * PI, c, Split::PeriodicHalf).unwrap();
            assert!(b.norm_psi <= ModalBasis::norm_psi_bound() + 1e-8, "N={blocks} c={c}");
            assert!(b.norm_psi_inverse <= b.norm_psi_inverse_bound() + 1e-8, "N={blocks} c={c}");
            // block structure: the same norms from A alone
            let sv = b.a.clone().singular_values();
            assert!((sv.max() - b.norm_psi).abs() < 1e-10);
        }
    }
}

#[test]
fn c_zero_symbols_match_dense_at_n16() {
    let grid = BlockGrid::periodic(16, 2.0 * PI).unwrap();
    let op = DiscreteOperator::periodic(&grid, SchemeSpec::new(StencilOrder::SecondBlock, BoundaryKind::Periodic, 0.0).unwrap())
        .unwrap();
    let q: DMatrix<f64> = op.to_dense();
    let s = grid.s();
    for w in 0..=8 {
        let (q1, q2) = block_symbols(StencilOrder::SecondBlock, 0.0, w as f64, s);
        let half = w as f64 * s / 2.0;
        assert!((q1 + 4.0 * half.sin().powi(2) / (s * s)).abs() < 1e-9);
        assert!((q2 + 4.0 * half.cos().powi(2) / (s * s)).abs() < 1e-9);
        // cos(ωx) is an eigenvector with eigenvalue Q̂₁
        let v = nalgebra::DVector::from_iterator(grid.len(), grid.points().iter().map(|x| (w as f64 * x).cos()));
        assert!((&q * &v - &v * q1).norm() < 1e-9 * (1.0 + q1.abs()) * v.norm());
    }
}
