//! Named parameter sets of the published figures, all at `η = 2`.

use crate::error::Result;
use crate::slit_model::{SlitGeometry, SlitMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureFixture {
    pub name: &'static str,
    pub mode: SlitMode,
    pub nf_a: f64,
    pub eta: f64,
    pub beta: f64,
    /// Default scan range in units of `a`.
    pub x_max_over_a: f64,
}

impl FigureFixture {
    pub fn geometry(&self) -> Result<SlitGeometry> {
        let beta = match self.mode {
            SlitMode::Single => 0.0,
            SlitMode::Double => self.beta,
        };
        SlitGeometry::from_dimensionless(self.nf_a, self.eta, beta)
    }
}

const fn single(name: &'static str, nf_a: f64, x_max_over_a: f64) -> FigureFixture {
    FigureFixture { name, mode: SlitMode::Single, nf_a, eta: 2.0, beta: 0.0, x_max_over_a }
}

const fn double(name: &'static str, nf_a: f64, x_max_over_a: f64) -> FigureFixture {
    FigureFixture { name, mode: SlitMode::Double, nf_a, eta: 2.0, beta: 13.0, x_max_over_a }
}

pub const FIG3A: FigureFixture = single("fig3a", 0.01, 1000.0);
pub const FIG3B: FigureFixture = single("fig3b", 0.5, 20.0);
pub const FIG3C: FigureFixture = single("fig3c", 100.0, 4.0);
pub const FIG4A: FigureFixture = double("fig4a", 0.001, 2000.0);
pub const FIG4B: FigureFixture = double("fig4b", 0.015, 200.0);
pub const FIG4C: FigureFixture = double("fig4c", 0.12, 100.0);
pub const FIG4D: FigureFixture = double("fig4d", 6.0, 40.0);

/// Separated-phase comparison set: `N_F(a) = 0.01`, `β = 600`.
pub const SEPARATED: FigureFixture =
    FigureFixture { name: "separated", mode: SlitMode::Double, nf_a: 0.01, eta: 2.0, beta: 600.0, x_max_over_a: 2000.0 };

pub const FIGURES: [FigureFixture; 7] = [FIG3A, FIG3B, FIG3C, FIG4A, FIG4B, FIG4C, FIG4D];

pub fn lookup(name: &str) -> Option<FigureFixture> {
    FIGURES.into_iter().chain([SEPARATED]).find(|f| f.name == name)
}
