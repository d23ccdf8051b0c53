//! The conjugated Dirichlet problems `-div(B grad u) = 0` on fixed templates.
//!
//! Axial fluxes use the symmetric Shortley-Weller form: a face cut at
//! fraction `theta` contributes `b / (theta h^2)` to the diagonal and moves
//! the boundary value to the right-hand side, without rescaling the row. The
//! mixed derivatives `d_i(b_ij d_j u) + d_j(b_ij d_i u)` use central
//! differences on the diagonal neighbours, which keeps the matrix symmetric;
//! its symbol `w^T B w + sum_i b_ii (v_i^2 - w_i^2)` is nonnegative for
//! constant positive-definite `B`.

use crate::fields::{pullback_matrix, szulkin, DomainKind, LogScale, Side, PURE_RHO};
use crate::{Error, Mat3, Result, Vec3};

use super::grid::{Cut, Grid, Template};
use super::pcg::{pcg, CsrMatrix, PcgReport};

/// Outer Dirichlet data before the side sign is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryData {
    Szulkin,
    LinearZ,
}

impl BoundaryData {
    #[inline]
    pub fn eval(&self, x: &Vec3) -> f64 {
        match self {
            BoundaryData::Szulkin => szulkin(x),
            BoundaryData::LinearZ => x.z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveSpec {
    pub kind: DomainKind,
    pub side: Side,
    pub scale: LogScale,
    /// Box half-width / ball radius `K`.
    pub extent: f64,
    pub h: f64,
    pub data: BoundaryData,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Optional inner radius excluded from a Szulkin ball.
    pub inner_radius: Option<f64>,
    /// Replace `B` by the identity (the untwisted reference problem).
    pub identity_coefficient: bool,
}

impl SolveSpec {
    pub fn new(kind: DomainKind, side: Side, scale: LogScale, extent: f64, h: f64) -> Self {
        let data = if kind.is_twist() { BoundaryData::Szulkin } else { BoundaryData::LinearZ };
        Self {
            kind,
            side,
            scale,
            extent,
            h,
            data,
            tolerance: 1e-8,
            max_iterations: 100_000,
            inner_radius: None,
            identity_coefficient: false,
        }
    }

    pub fn template(&self) -> Template {
        match self.kind {
            DomainKind::TwistedSzulkin(_) => Template::SzulkinBall { side: self.side, k: self.extent, r_in: self.inner_radius },
            DomainKind::OscillatingGraph(_) => Template::HalfSpaceBox { side: self.side, k: self.extent },
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        let reach = match self.kind {
            DomainKind::TwistedSzulkin(_) => self.extent,
            DomainKind::OscillatingGraph(_) => self.extent * 3f64.sqrt(),
        };
        let trivial = self.identity_coefficient
            || match self.kind {
                DomainKind::TwistedSzulkin(p) => p.is_none(),
                DomainKind::OscillatingGraph(a) => a == crate::fields::GraphAmplitude::Flat,
            };
        if !trivial && self.scale.at(reach) < PURE_RHO {
            return Err(Error::Domain(format!(
                "combined log-scale {} at the grid corner lies below ln 100",
                self.scale.at(reach)
            )));
        }
        Ok(())
    }

    #[inline]
    fn coefficient(&self, x: &Vec3) -> Result<Mat3> {
        if self.identity_coefficient {
            return Ok(Mat3::identity());
        }
        pullback_matrix(&self.kind, self.scale, x)
    }

    /// Extended boundary data, clamped at zero across the interface.
    #[inline]
    fn outer_value(&self, x: &Vec3) -> f64 {
        (self.side.sign() * self.data.eval(x)).max(0.0)
    }
}

/// Node classes in exported masks.
pub const MASK_EXTERIOR: u8 = 0;
pub const MASK_ACTIVE: u8 = 1;
pub const MASK_DIRICHLET: u8 = 2;

#[derive(Clone, Debug)]
pub struct GridSolution {
    pub spec: SolveSpec,
    pub grid: Grid,
    /// `MASK_*` per node.
    pub mask: Vec<u8>,
    /// Solution at active nodes, boundary data at Dirichlet nodes, zero elsewhere.
    pub values: Vec<f64>,
    pub report: PcgReport,
    pub unknowns: usize,
    pub cut_faces: usize,
    /// Smallest Shortley-Weller fraction before clamping.
    pub min_cut_fraction: f64,
    pub min_value: f64,
}

const MIN_FRACTION: f64 = 1e-3;

struct Assembled {
    matrix: CsrMatrix,
    rhs: Vec<f64>,
    unknown_of: Vec<u32>,
    nodes: Vec<usize>,
    mask: Vec<u8>,
    cut_faces: usize,
    min_cut: f64,
}

fn assemble(spec: &SolveSpec, tpl: &Template, grid: &Grid) -> Result<Assembled> {
    let n = grid.len();
    let mut mask = vec![MASK_EXTERIOR; n];
    let mut unknown_of = vec![u32::MAX; n];
    let mut nodes = Vec::new();
    for idx in 0..n {
        let x = grid.pos(grid.coords(idx));
        if tpl.is_active(&x) {
            mask[idx] = MASK_ACTIVE;
            unknown_of[idx] = nodes.len() as u32;
            nodes.push(idx);
        } else if tpl.level(&x) == 0.0 || (tpl.level(&x) > 0.0 && !tpl.in_region(&x)) {
            mask[idx] = MASK_DIRICHLET;
        }
    }
    let h = grid.h;
    let h2 = h * h;
    let e = [Vec3::x(), Vec3::y(), Vec3::z()];
    let mut matrix = CsrMatrix::with_capacity(nodes.len(), nodes.len() * 19);
    let mut rhs = vec![0.0; nodes.len()];
    let mut cut_faces = 0;
    let mut min_cut: f64 = 1.0;
    let mut row: Vec<(u32, f64)> = Vec::with_capacity(32);
    let dims = grid.dims;
    let neighbour = |c: [usize; 3], off: [i64; 3]| -> Option<usize> {
        let mut q = [0usize; 3];
        for a in 0..3 {
            let v = c[a] as i64 + off[a];
            if v < 0 || v >= dims[a] as i64 {
                return None;
            }
            q[a] = v as usize;
        }
        Some(grid.index(q[0], q[1], q[2]))
    };
    for (u, &idx) in nodes.iter().enumerate() {
        row.clear();
        let c = grid.coords(idx);
        let cf = [c[0] as f64, c[1] as f64, c[2] as f64];
        let x = grid.pos(c);
        let mut diag = 0.0;
        // axial terms
        for a in 0..3 {
            for s in [1.0, -1.0] {
                let mut off = [0i64; 3];
                off[a] = s as i64;
                let nb = neighbour(c, off).filter(|&j| mask[j] == MASK_ACTIVE);
                match nb {
                    Some(j) => {
                        let mut m = cf;
                        m[a] += 0.5 * s;
                        let b = spec.coefficient(&grid.at(m))?[(a, a)];
                        diag += b / h2;
                        row.push((unknown_of[j], -b / h2));
                    }
                    None => {
                        let d = e[a] * (s * h);
                        let (lam, cut) = tpl.exit(&x, &d);
                        cut_faces += 1;
                        min_cut = min_cut.min(lam);
                        let lam = lam.max(MIN_FRACTION);
                        let mut m = cf;
                        m[a] += 0.5 * s * lam;
                        let b = spec.coefficient(&grid.at(m))?[(a, a)];
                        let g = match cut {
                            Cut::Interface => 0.0,
                            Cut::Outer => spec.outer_value(&(x + d * lam)),
                        };
                        diag += b / (lam * h2);
                        rhs[u] += b / (lam * h2) * g;
                    }
                }
            }
        }
        row.push((u as u32, diag));
        // mixed terms
        if !spec.identity_coefficient {
            let mut bn = [[Mat3::zeros(); 2]; 3];
            for a in 0..3 {
                for (si, s) in [1.0, -1.0].into_iter().enumerate() {
                    let mut m = cf;
                    m[a] += s;
                    bn[a][si] = spec.coefficient(&grid.at(m))?;
                }
            }
            for a in 0..3 {
                for b in (a + 1)..3 {
                    for (sa_i, sa) in [1i64, -1].into_iter().enumerate() {
                        for (sb_i, sb) in [1i64, -1].into_iter().enumerate() {
                            let w = (bn[a][sa_i][(a, b)] + bn[b][sb_i][(a, b)]) / (4.0 * h2);
                            if w == 0.0 {
                                continue;
                            }
                            // entry for u(x + sa e_a + sb e_b) carries sign -sa*sb
                            let coef = -(sa * sb) as f64 * w;
                            let mut off = [0i64; 3];
                            off[a] = sa;
                            off[b] = sb;
                            match neighbour(c, off).filter(|&j| mask[j] == MASK_ACTIVE) {
                                Some(j) => row.push((unknown_of[j], coef)),
                                None => {
                                    let mut m = cf;
                                    m[a] += sa as f64;
                                    m[b] += sb as f64;
                                    rhs[u] -= coef * spec.outer_value(&grid.at(m));
                                }
                            }
                        }
                    }
                }
            }
        }
        matrix.push_row(&mut row);
    }
    Ok(Assembled { matrix, rhs, unknown_of, nodes, mask, cut_faces, min_cut })
}

/// Assemble and solve the conjugated problem described by `spec`.
pub fn solve_conjugated(spec: &SolveSpec) -> Result<GridSolution> {
    solve_with_guess(spec, None)
}

/// As [`solve_conjugated`], starting PCG from `guess` (node values on the same grid).
pub fn solve_with_guess(spec: &SolveSpec, guess: Option<&dyn Fn(&Vec3) -> f64>) -> Result<GridSolution> {
    spec.validate()?;
    let tpl = spec.template();
    let grid = tpl.grid(spec.h)?;
    let asm = assemble(spec, &tpl, &grid)?;
    let mut x: Vec<f64> = match guess {
        Some(f) => asm.nodes.iter().map(|&i| f(&grid.pos(grid.coords(i)))).collect(),
        None => vec![0.0; asm.nodes.len()],
    };
    let report = pcg(&asm.matrix, &asm.rhs, &mut x, spec.tolerance, spec.max_iterations)?;
    let mut values = vec![0.0; grid.len()];
    for (idx, v) in values.iter_mut().enumerate() {
        if asm.mask[idx] == MASK_DIRICHLET {
            *v = spec.outer_value(&grid.pos(grid.coords(idx)));
        }
    }
    for (u, &idx) in asm.nodes.iter().enumerate() {
        values[idx] = x[u];
    }
    let min_value = x.iter().copied().fold(f64::INFINITY, f64::min);
    let _ = &asm.unknown_of;
    Ok(GridSolution {
        spec: *spec,
        grid,
        mask: asm.mask,
        values,
        report,
        unknowns: asm.nodes.len(),
        cut_faces: asm.cut_faces,
        min_cut_fraction: asm.min_cut,
        min_value,
    })
}

impl GridSolution {
    /// The opposite side's solution obtained through `x -> -x`.
    ///
    /// Both constructions are odd and the pulled-back coefficient is even, so
    /// on a grid symmetric about the origin this is exactly the discrete
    /// solution of the other side.
    pub fn antipodal(&self) -> GridSolution {
        let n = self.grid.len();
        let mut mask = vec![0u8; n];
        let mut values = vec![0.0; n];
        for idx in 0..n {
            let m = self.grid.mirror(idx);
            mask[idx] = self.mask[m];
            values[idx] = self.values[m];
        }
        GridSolution {
            spec: SolveSpec { side: self.spec.side.opposite(), ..self.spec },
            mask,
            values,
            ..self.clone()
        }
    }

    #[inline]
    pub fn value_at(&self, c: [usize; 3]) -> Option<f64> {
        let idx = self.grid.index(c[0], c[1], c[2]);
        (self.mask[idx] != MASK_EXTERIOR).then(|| self.values[idx])
    }

    /// Trilinear interpolation; `None` unless all eight corners are active or
    /// Dirichlet nodes.
    pub fn interpolate(&self, p: &Vec3) -> Option<f64> {
        let g = &self.grid;
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for a in 0..3 {
            let t = (p[a] - g.origin[a]) / g.h;
            let f = t.floor();
            if f < 0.0 || f as usize + 1 >= g.dims[a] {
                return None;
            }
            base[a] = f as usize;
            frac[a] = t - f;
        }
        let mut acc = 0.0;
        for corner in 0..8 {
            let o = [corner & 1, (corner >> 1) & 1, (corner >> 2) & 1];
            let idx = g.index(base[0] + o[0], base[1] + o[1], base[2] + o[2]);
            if self.mask[idx] == MASK_EXTERIOR {
                return None;
            }
            let mut w = 1.0;
            for a in 0..3 {
                w *= if o[a] == 1 { frac[a] } else { 1.0 - frac[a] };
            }
            acc += w * self.values[idx];
        }
        Some(acc)
    }

    /// Maximum nodal difference to `other` over nodes active in both and
    /// satisfying `filter`.
    pub fn max_difference<P: Fn(&Vec3) -> bool>(&self, other: &GridSolution, filter: P) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument("solutions live on different grids".into()));
        }
        let mut worst: f64 = 0.0;
        for idx in 0..self.grid.len() {
            if self.mask[idx] != MASK_ACTIVE || other.mask[idx] != MASK_ACTIVE {
                continue;
            }
            if filter(&self.grid.pos(self.grid.coords(idx))) {
                worst = worst.max((self.values[idx] - other.values[idx]).abs());
            }
        }
        Ok(worst)
    }

    /// Maximum of `|u - f|` over active nodes satisfying `filter`.
    pub fn max_deviation<F: Fn(&Vec3) -> f64, P: Fn(&Vec3) -> bool>(&self, f: F, filter: P) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in 0..self.grid.len() {
            if self.mask[idx] != MASK_ACTIVE {
                continue;
            }
            let x = self.grid.pos(self.grid.coords(idx));
            if filter(&x) {
                worst = worst.max((self.values[idx] - f(&x)).abs());
            }
        }
        worst
    }
}
