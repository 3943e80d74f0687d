//! CSV tables and SVG figures for each result type.

use crate::dto::*;
use crate::output::{cell_f64, cell_opt, Palette, Plot, Series, Table};

/// Flat and graphical views of a result.
pub trait Render {
    fn table(&self) -> Table;
    fn plot(&self) -> Plot;
}

const BLUE: &str = "#4477aa";
const RED: &str = "#ee6677";
const GREEN: &str = "#228833";
const PURPLE: &str = "#aa3377";
const CYCLE: [&str; 4] = [BLUE, RED, GREEN, PURPLE];

fn xy(z: &Cplx) -> (f64, f64) {
    (z.re, z.im)
}

fn scatter(title: String, series: Vec<Series>, unit_circle: bool) -> Plot {
    Plot::Scatter {
        title,
        x_label: "Re".into(),
        y_label: "Im".into(),
        series,
        unit_circle,
    }
}

impl Render for QuasiResult {
    fn table(&self) -> Table {
        let mut t = Table::new(&["index", "sector", "eps_re", "eps_im"]);
        for (i, (e, s)) in self.epsilons.iter().zip(&self.sectors).enumerate() {
            t.push(vec![i.to_string(), s.clone(), cell_f64(e.re), cell_f64(e.im)]);
        }
        t
    }

    fn plot(&self) -> Plot {
        let series = ["odd", "even"]
            .iter()
            .zip([BLUE, RED])
            .map(|(name, color)| Series {
                label: name.to_string(),
                color,
                points: self
                    .epsilons
                    .iter()
                    .zip(&self.sectors)
                    .filter(|(_, s)| s == name)
                    .map(|(e, _)| xy(e))
                    .collect(),
            })
            .collect();
        scatter(format!("quasi-energies, L = {}", self.size), series, false)
    }
}

impl Render for SpectrumResult {
    fn table(&self) -> Table {
        let mut t = Table::new(&["origin", "index", "re", "im"]);
        let sets = [("free_fermion", Some(&self.energies)), ("exact_diag", self.exact.as_ref())];
        for (origin, set) in sets {
            for (i, e) in set.into_iter().flatten().enumerate() {
                t.push(vec![origin.into(), i.to_string(), cell_f64(e.re), cell_f64(e.im)]);
            }
        }
        t
    }

    fn plot(&self) -> Plot {
        let mut series = vec![Series {
            label: "free fermion".into(),
            color: BLUE,
            points: self.energies.iter().map(xy).collect(),
        }];
        if let Some(ed) = &self.exact {
            series.push(Series {
                label: "exact diagonalization".into(),
                color: RED,
                points: ed.iter().map(xy).collect(),
            });
        }
        scatter(format!("spectrum, L = {}", self.size), series, false)
    }
}

impl Render for EpsResult {
    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "k_re", "k_im", "lambda_re", "lambda_im", "branch", "ring", "quasi_gap", "lr_overlap",
            "on_axis",
        ]);
        for r in &self.records {
            t.push(vec![
                cell_f64(r.k.re),
                cell_f64(r.k.im),
                cell_f64(r.lambda.re),
                cell_f64(r.lambda.im),
                r.branch.clone(),
                r.ring.clone(),
                cell_f64(r.quasi_gap),
                cell_f64(r.lr_overlap),
                r.on_axis.to_string(),
            ]);
        }
        t
    }

    fn plot(&self) -> Plot {
        let ring = |name: &str| self.records.iter().filter(|r| r.ring == name).map(|r| xy(&r.lambda)).collect();
        let series = vec![
            Series {
                label: "inner".into(),
                color: BLUE,
                points: ring("inner"),
            },
            Series {
                label: "outer".into(),
                color: RED,
                points: ring("outer"),
            },
        ];
        scatter(format!("exceptional points, L = {}", self.size), series, true)
    }
}

impl Render for RingsResult {
    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "L",
            "inner_max_dev",
            "outer_max_dev",
            "max_angle_error",
            "unmatched",
            "two_sided",
            "inner_branch",
            "outer_branch",
        ]);
        for r in &self.reports {
            t.push(vec![
                r.size.to_string(),
                cell_f64(r.inner_max_dev),
                cell_f64(r.outer_max_dev),
                cell_f64(r.max_angle_error),
                r.unmatched.to_string(),
                r.two_sided.to_string(),
                r.inner_branch.clone().unwrap_or_default(),
                r.outer_branch.clone().unwrap_or_default(),
            ]);
        }
        t
    }

    fn plot(&self) -> Plot {
        let series = self
            .reports
            .iter()
            .enumerate()
            .map(|(i, r)| Series {
                label: format!("L = {}", r.size),
                color: CYCLE[i % CYCLE.len()],
                points: r.lambdas.iter().map(xy).collect(),
            })
            .collect();
        scatter("EP rings".into(), series, true)
    }
}

fn grid_point(g: &GridSpec, idx: usize) -> (f64, f64) {
    let t = |n: usize, m: usize| if m <= 1 { 0.0 } else { n as f64 / (m - 1) as f64 };
    (
        g.re_min + (g.re_max - g.re_min) * t(idx % g.nx, g.nx),
        g.im_min + (g.im_max - g.im_min) * t(idx / g.nx, g.ny),
    )
}

impl Render for GapResult {
    fn table(&self) -> Table {
        let mut t = Table::new(&["lambda_re", "lambda_im", "gap"]);
        for (idx, gap) in self.gaps.iter().enumerate() {
            let (re, im) = grid_point(&self.grid, idx);
            t.push(vec![cell_f64(re), cell_f64(im), cell_opt(*gap)]);
        }
        t
    }

    fn plot(&self) -> Plot {
        Plot::Heatmap {
            title: format!("log10 quasi-energy gap, L = {}", self.size),
            bounds: (self.grid.re_min, self.grid.re_max, self.grid.im_min, self.grid.im_max),
            nx: self.grid.nx,
            ny: self.grid.ny,
            values: self.gaps.iter().map(|g| g.map(|v| v.max(1e-16).log10())).collect(),
            palette: Palette::Ramp,
        }
    }
}

impl Render for PtResult {
    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "lambda_i",
            "conjugation_defect",
            "real_count",
            "conjugate_pair_count",
            "passed",
        ]);
        for p in &self.points {
            t.push(vec![
                cell_f64(p.lambda_i),
                cell_f64(p.conjugation_defect),
                p.real_count.to_string(),
                p.conjugate_pair_count.to_string(),
                p.passed.to_string(),
            ]);
        }
        t
    }

    fn plot(&self) -> Plot {
        Plot::Scatter {
            title: format!("conjugation defect on the imaginary axis, L = {}", self.size),
            x_label: "Im λ".into(),
            y_label: "log10 defect".into(),
            series: vec![Series {
                label: self.route.clone(),
                color: BLUE,
                points: self
                    .points
                    .iter()
                    .map(|p| (p.lambda_i, p.conjugation_defect.max(1e-18).log10()))
                    .collect(),
            }],
            unit_circle: false,
        }
    }
}

impl Render for PhaseResult {
    fn table(&self) -> Table {
        let mut t = Table::new(&["lambda_re", "lambda_im", "winding", "status", "samples_used"]);
        for s in &self.samples {
            t.push(vec![
                cell_f64(s.lambda.re),
                cell_f64(s.lambda.im),
                s.winding.map(|w| w.to_string()).unwrap_or_default(),
                s.status.clone(),
                s.samples_used.to_string(),
            ]);
        }
        t
    }

    fn plot(&self) -> Plot {
        Plot::Heatmap {
            title: "winding number".into(),
            bounds: (self.grid.re_min, self.grid.re_max, self.grid.im_min, self.grid.im_max),
            nx: self.grid.nx,
            ny: self.grid.ny,
            values: self
                .samples
                .iter()
                .map(|s| match (s.winding, s.status.as_str()) {
                    (Some(w), _) => Some(w as f64),
                    (None, "boundary") => Some(0.0),
                    (None, _) => None,
                })
                .collect(),
            palette: Palette::Sign,
        }
    }
}

impl Render for VerifyResult {
    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "kind",
            "lambda_re",
            "lambda_im",
            "quasi_gap",
            "lr_overlap",
            "energy_gap",
            "hamiltonian_overlap",
            "coalescing_pairs",
            "passed",
        ]);
        for c in &self.checks {
            let h = c.hamiltonian.as_ref();
            t.push(vec![
                "ep".into(),
                cell_f64(c.lambda.re),
                cell_f64(c.lambda.im),
                cell_f64(c.quasi_gap),
                cell_f64(c.lr_overlap),
                cell_opt(h.map(|h| h.energy_gap)),
                cell_opt(h.map(|h| h.lr_overlap)),
                h.map(|h| h.coalescing_pairs.to_string()).unwrap_or_default(),
                c.passed.to_string(),
            ]);
        }
        for tp in &self.trivial_points {
            t.push(vec![
                "trivial".into(),
                cell_f64(tp.lambda.re),
                cell_f64(tp.lambda.im),
                cell_f64(tp.quasi_gap),
                cell_f64(tp.lr_overlap),
                String::new(),
                String::new(),
                String::new(),
                (!tp.is_ep).to_string(),
            ]);
        }
        t
    }

    fn plot(&self) -> Plot {
        let pick = |ok: bool| self.checks.iter().filter(|c| c.passed == ok).map(|c| xy(&c.lambda)).collect();
        let series = vec![
            Series {
                label: "verified".into(),
                color: GREEN,
                points: pick(true),
            },
            Series {
                label: "failed".into(),
                color: RED,
                points: pick(false),
            },
            Series {
                label: "trivial".into(),
                color: PURPLE,
                points: self.trivial_points.iter().map(|t| xy(&t.lambda)).collect(),
            },
        ];
        scatter(format!("EP verification, L = {}", self.size), series, true)
    }
}
