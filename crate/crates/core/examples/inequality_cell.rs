//! Both sides of a few inequalities at single parameter cells.

use std::sync::Arc;

use dunkl::inequalities::{eval_theorem, Cell, RatioSample, Subject, TheoremId};
use dunkl::measure::{make_grid, RadialProfile, WeightParams};

fn main() -> dunkl::Result<()> {
    let params = WeightParams::new(0.7)?;
    let grid = Arc::new(make_grid(40.0, 64, 64)?);
    let f = RadialProfile::from_fn(params, grid, |r| (-(r * r)).exp() * (1.0 + r))?;
    let a = f.analysis()?;
    let cells = [
        (TheoremId::HausdorffYoung, Cell { p: Some(1.5), ..Cell::default() }),
        (TheoremId::Pitt1, Cell { p: Some(1.5), q: Some(2.25), ..Cell::default() }),
        (
            TheoremId::SharpJackson14,
            Cell { p: Some(3.0), r: Some(1.0), n_or_delta: Some(8.0), ..Cell::default() },
        ),
        (TheoremId::TitchmarshP2, Cell { p: Some(2.0), s: Some(0.5), ..Cell::default() }),
    ];
    for (id, cell) in cells {
        let e = eval_theorem(Subject::Profile(&a), id, &cell)?;
        let row = RatioSample::new(id, "example", cell, e)?;
        println!(
            "{id:<16} {cell:<32} lhs {:.4e} rhs {:.4e} ratio {:.4}{}",
            row.lhs,
            row.rhs,
            row.ratio,
            if row.surrogate { " (surrogate E)" } else { "" }
        );
    }
    Ok(())
}
