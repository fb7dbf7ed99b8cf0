//! Cube doubling by three-colour substitution.
//!
//! The rules `B → BG`, `G → GR`, `R → BBR` are the shift `I + R` of the
//! replacement matrix of `x³ − 2`, so the green and red counts approach the
//! ratio `2^(1/3)`. The construction lays the greens and reds end to end as
//! `A–B–C`, draws a unit segment `CD`, and meets the parallel to `BD`
//! through `A` with line `CD` at `E`. Similar triangles give
//! `DE = |CD|·n(G)/n(R)`.
//!
//! All coordinates are exact rationals. The direction of `CD` is a rational
//! point on the unit circle close to the requested angle, so `AE ∥ BD`
//! holds exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, ReplacementMatrix};
use crate::numeric::{approximate_rational, rational_to_f64};
use crate::rewrite::{self, count_symbols, ReplacementRuleSet, Word, DEFAULT_WORD_CAP};

/// Segments drawn per band before the rest is elided.
pub const BAND_SEGMENT_CAP: usize = 2_000;
/// Largest denominator used for `tan(θ/2)`.
const ANGLE_DENOMINATOR: u64 = 1_000;

pub const BLUE: usize = 0;
pub const GREEN: usize = 1;
pub const RED: usize = 2;

/// `[[1, 0, 2], [1, 1, 0], [0, 1, 1]]`, columns giving `B → BG`, `G → GR`,
/// `R → BBR`.
pub fn delian_matrix() -> ReplacementMatrix {
    ReplacementMatrix::from_matrix(IntMatrix::from_rows(&[
        vec![1, 0, 2],
        vec![1, 1, 0],
        vec![0, 1, 1],
    ]))
}

/// `(n(B), n(G), n(R))` after `iterations` rewrites of `B`, by count steps.
pub fn delian_counts(iterations: usize) -> [BigInt; 3] {
    let m = delian_matrix();
    let mut n = vec![BigInt::one(), BigInt::zero(), BigInt::zero()];
    for _ in 0..iterations {
        n = m.apply(&n).expect("3-vector");
    }
    let [b, g, r]: [BigInt; 3] = n.try_into().expect("3-vector");
    [b, g, r]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub x: BigRational,
    pub y: BigRational,
}

impl Point {
    fn new(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    fn origin() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    fn offset(&self, dx: &BigRational, dy: &BigRational) -> Point {
        Point::new(&self.x + dx, &self.y + dy)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational_to_f64(&self.x), rational_to_f64(&self.y))
    }
}

/// `(cos, sin)` of a rational point on the unit circle near `theta_deg`,
/// from a rational approximation of `tan(θ/2)`. `θ = 53.130…°` gives
/// `(3/5, 4/5)`.
pub fn unit_direction(theta_deg: f64) -> Result<(BigRational, BigRational)> {
    if !(theta_deg > 0.0 && theta_deg < 180.0) {
        return Err(Error::BadAngle(theta_deg));
    }
    let t = (theta_deg.to_radians() / 2.0).tan();
    let (mut p, mut q) = approximate_rational(t, ANGLE_DENOMINATOR);
    if p == 0 {
        (p, q) = (1, ANGLE_DENOMINATOR);
    }
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let norm = &p * &p + &q * &q;
    let cos = BigRational::new(&q * &q - &p * &p, norm.clone());
    let sin = BigRational::new(BigInt::from(2) * &p * &q, norm);
    Ok((cos, sin))
}

/// Exact similar-triangle construction for `green` and `red` counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub green: BigInt,
    pub red: BigInt,
    pub unit: BigRational,
    /// `(cos, sin)` of the direction of `CD`.
    pub direction: (BigRational, BigRational),
    /// Angle of `direction`, which is close to the requested angle.
    pub theta_deg: f64,
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
    pub e: Point,
    /// `|DE| / unit`, equal to `green / red`.
    pub de: BigRational,
}

impl Construction {
    /// `|DE|` in drawing units.
    pub fn de_length(&self) -> BigRational {
        &self.de * &self.unit
    }

    /// Cross product of `AE` and `BD` in exact arithmetic.
    pub fn parallel_defect(&self) -> BigRational {
        let ae = (&self.e.x - &self.a.x, &self.e.y - &self.a.y);
        let bd = (&self.d.x - &self.b.x, &self.d.y - &self.b.y);
        &ae.0 * &bd.1 - &ae.1 * &bd.0
    }

    /// `DE³ − 2` with `DE` in units of `CD`.
    pub fn cube_defect(&self) -> BigRational {
        &self.de * &self.de * &self.de - BigRational::from_integer(2.into())
    }
}

pub fn construct(
    green: &BigInt,
    red: &BigInt,
    theta_deg: f64,
    unit: &BigRational,
) -> Result<Construction> {
    if red.is_zero() || red.is_negative() || green.is_negative() {
        return Err(Error::NoRedSegments);
    }
    if !unit.is_positive() {
        return Err(Error::BadUnit);
    }
    let (cos, sin) = unit_direction(theta_deg)?;
    let zero = BigRational::zero();
    let g = BigRational::from_integer(green.clone());
    let r = BigRational::from_integer(red.clone());

    let a = Point::origin();
    let b = Point::new(&g * unit, zero.clone());
    let c = Point::new((&g + &r) * unit, zero);
    let d = c.offset(&(&cos * unit), &(&sin * unit));
    // |CE| = |CD|·|CA|/|CB|
    let ce = unit * (&g + &r) / &r;
    let e = c.offset(&(&cos * &ce), &(&sin * &ce));
    let theta = rational_to_f64(&sin)
        .atan2(rational_to_f64(&cos))
        .to_degrees();
    Ok(Construction {
        green: green.clone(),
        red: red.clone(),
        unit: unit.clone(),
        direction: (cos, sin),
        theta_deg: theta,
        a,
        b,
        c,
        d,
        e,
        de: g / r,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelianOptions {
    pub iterations: usize,
    pub theta_deg: f64,
    pub unit_px: u32,
    pub word_cap: usize,
}

/// `atan2(4, 3)` in degrees; selects the 3-4-5 direction.
pub const DEFAULT_THETA_DEG: f64 = 53.130_102_354_155_98;

impl Default for DelianOptions {
    fn default() -> Self {
        Self {
            iterations: 10,
            theta_deg: DEFAULT_THETA_DEG,
            unit_px: 20,
            word_cap: DEFAULT_WORD_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionTrace {
    pub iterations: usize,
    /// Words for iterations `0 …` while they fit under the word cap.
    pub lines: Vec<Word>,
    /// `(n(B), n(G), n(R))` after `iterations` rewrites.
    pub counts: [BigInt; 3],
    /// `None` while there are no red segments (fewer than two iterations).
    pub construction: Option<Construction>,
    pub unit_px: u32,
}

pub fn trace(opts: &DelianOptions) -> Result<ConstructionTrace> {
    if opts.unit_px == 0 {
        return Err(Error::BadUnit);
    }
    // validate the angle even when there is nothing to construct yet
    unit_direction(opts.theta_deg)?;
    let rules = ReplacementRuleSet::from_matrix(&delian_matrix());
    let lines = rules
        .iterate(
            &Word::letter(BLUE as rewrite::Letter),
            opts.iterations,
            opts.word_cap,
        )
        .words;
    let counts = delian_counts(opts.iterations);
    if let Some(last) = lines.get(opts.iterations) {
        debug_assert_eq!(count_symbols(last, 3).0, counts.to_vec());
    }
    let unit = BigRational::from_integer(opts.unit_px.into());
    let construction = if counts[RED].is_zero() {
        None
    } else {
        Some(construct(
            &counts[GREEN],
            &counts[RED],
            opts.theta_deg,
            &unit,
        )?)
    };
    Ok(ConstructionTrace {
        iterations: opts.iterations,
        lines,
        counts,
        construction,
        unit_px: opts.unit_px,
    })
}

const COLOURS: [&str; 3] = ["blue", "green", "red"];
const MARGIN: f64 = 20.0;

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

struct Svg {
    body: String,
    width: f64,
    height: f64,
}

impl Svg {
    #[allow(clippy::too_many_arguments)]
    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64, extra: &str) {
        self.width = self.width.max(x1.max(x2));
        self.height = self.height.max(y1.max(y2));
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}"{extra}/>"#,
            fmt_num(x1),
            fmt_num(y1),
            fmt_num(x2),
            fmt_num(y2),
            fmt_num(width),
        );
    }

    fn text(&mut self, x: f64, y: f64, size: f64, content: &str) {
        self.width = self
            .width
            .max(x + size * 0.6 * content.chars().count() as f64);
        self.height = self.height.max(y);
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="{}">{content}</text>"#,
            fmt_num(x),
            fmt_num(y),
            fmt_num(size),
        );
    }
}

/// SVG 1.1 document: one band of unit segments per iteration line, then the
/// construction. The horizontal `A–C` run is drawn compressed when it would
/// not fit; `CD` keeps its unit length, and the ratio `|CA|/|CB|` (hence the
/// parallel and `DE`) is unchanged by the compression.
pub fn render_svg(trace: &ConstructionTrace) -> String {
    let u = trace.unit_px as f64;
    let pitch = u.max(8.0);
    let stroke = (u / 4.0).max(1.0);
    let mut svg = Svg {
        body: String::new(),
        width: 0.0,
        height: 0.0,
    };

    let mut y = MARGIN + pitch / 2.0;
    for (k, word) in trace.lines.iter().enumerate() {
        let _ = writeln!(svg.body, r#"<g id="band-{k}" class="band">"#);
        for (s, &letter) in word.letters().iter().take(BAND_SEGMENT_CAP).enumerate() {
            let x = MARGIN + s as f64 * u;
            let colour = COLOURS[letter as usize % 3];
            svg.line(x, y, x + u, y, colour, stroke, "");
        }
        if word.len() > BAND_SEGMENT_CAP {
            let x = MARGIN + BAND_SEGMENT_CAP as f64 * u + u / 2.0;
            let rest = word.len() - BAND_SEGMENT_CAP;
            svg.text(x, y + u / 4.0, u.max(10.0), &format!("… {rest} more"));
        }
        svg.body.push_str("</g>\n");
        y += pitch;
    }
    if trace.lines.len() <= trace.iterations {
        let first = trace.lines.len();
        svg.text(
            MARGIN,
            y + u / 4.0,
            12.0,
            &format!(
                "lines {first}–{} exceed the word cap and are counted, not drawn",
                trace.iterations
            ),
        );
        y += pitch;
    }

    let [b, g, r] = &trace.counts;
    let footer = format!("after {} iterations: B={b} G={g} R={r}", trace.iterations);
    match &trace.construction {
        None => {
            svg.text(MARGIN, y + 16.0, 12.0, &footer);
        }
        Some(con) => render_construction(&mut svg, con, y + pitch, u, &footer),
    }

    let width = svg.width + MARGIN;
    let height = svg.height + MARGIN;
    format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" ",
            "width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            "{body}</svg>\n"
        ),
        w = fmt_num(width),
        h = fmt_num(height),
        body = svg.body,
    )
}

fn render_construction(svg: &mut Svg, con: &Construction, top: f64, u: f64, footer: &str) {
    let g = rational_to_f64(&BigRational::from_integer(con.green.clone()));
    let r = rational_to_f64(&BigRational::from_integer(con.red.clone()));
    let (cos, sin) = (
        rational_to_f64(&con.direction.0),
        rational_to_f64(&con.direction.1),
    );
    let ce = u * (g + r) / r;

    let full = (g + r) * u;
    let avail = svg.width.max(40.0 * u).max(400.0) - MARGIN;
    let per_unit = if full <= avail { u } else { avail / (g + r) };

    let rise = ce * sin;
    let base = top + rise + 24.0;
    // an obtuse angle puts E left of C, possibly past A
    let ax = MARGIN + (-ce * cos - (g + r) * per_unit).max(0.0);
    let bx = ax + g * per_unit;
    let cx = bx + r * per_unit;
    let (dx, dy) = (cx + u * cos, base - u * sin);
    let (ex, ey) = (cx + ce * cos, base - ce * sin);

    svg.body.push_str("<g id=\"construction\">\n");
    svg.line(ax, base, bx, base, "green", 3.0, r#" id="green-run""#);
    svg.line(bx, base, cx, base, "red", 3.0, r#" id="red-run""#);
    svg.line(cx, base, dx, dy, "black", 1.5, r#" id="cd""#);
    svg.line(bx, base, dx, dy, "black", 1.0, r#" id="bd""#);
    svg.line(
        ax,
        base,
        ex,
        ey,
        "black",
        1.0,
        r#" id="ae" stroke-dasharray="4 3""#,
    );
    svg.line(dx, dy, ex, ey, "black", 4.0, r#" id="de""#);
    for (label, x, y) in [
        ("A", ax, base + 16.0),
        ("B", bx, base + 16.0),
        ("C", cx, base + 16.0),
        ("D", dx + 6.0, dy),
        ("E", ex + 6.0, ey),
    ] {
        svg.text(x, y, 12.0, label);
    }
    let de = &con.de;
    let de_f = rational_to_f64(de);
    svg.text(
        MARGIN,
        base + 40.0,
        12.0,
        &format!(
            "DE = {de} ≈ {de_f:.12} (|CD| = 1), DE³ ≈ {:.12}",
            de_f.powi(3)
        ),
    );
    svg.text(
        MARGIN,
        base + 58.0,
        12.0,
        &format!("θ ≈ {:.2}°, {footer}", con.theta_deg),
    );
    svg.body.push_str("</g>\n");
}

pub fn emit_svg(trace: &ConstructionTrace, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(trace))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(k: usize) -> [i64; 3] {
        delian_counts(k).map(|c| i64::try_from(c).unwrap())
    }

    #[test]
    fn small_counts() {
        assert_eq!(counts(0), [1, 0, 0]);
        assert_eq!(counts(3), [3, 3, 3]);
        assert_eq!(counts(5), [21, 15, 12]);
    }

    #[test]
    fn counts_agree_with_explicit_words() {
        let rules = ReplacementRuleSet::from_matrix(&delian_matrix());
        let words = rules.iterate(&Word::letter(0), 8, DEFAULT_WORD_CAP).words;
        for (k, w) in words.iter().enumerate() {
            assert_eq!(count_symbols(w, 3).0, delian_counts(k).to_vec());
        }
        let a = rewrite::Alphabet::new(3);
        assert_eq!(a.render(&words[2]), "BGGR");
        // the fourth line follows the rules: 9 letters
        assert_eq!(a.render(&words[3]), "BGGRGRBBR");
    }

    #[test]
    fn three_four_five_direction() {
        let (c, s) = unit_direction(DEFAULT_THETA_DEG).unwrap();
        assert_eq!(c, BigRational::new(3.into(), 5.into()));
        assert_eq!(s, BigRational::new(4.into(), 5.into()));
        for theta in [0.5, 30.0, 90.0, 179.5] {
            let (c, s) = unit_direction(theta).unwrap();
            assert!((&c * &c + &s * &s).is_one());
            assert!(s.is_positive());
            let got = rational_to_f64(&s).atan2(rational_to_f64(&c)).to_degrees();
            assert!((got - theta).abs() < 0.2, "{theta} -> {got}");
        }
        assert!(unit_direction(0.0).is_err());
        assert!(unit_direction(180.0).is_err());
        assert!(unit_direction(f64::NAN).is_err());
    }

    #[test]
    fn construction_from_five_iterations() {
        let one = BigRational::one();
        let con = construct(&15.into(), &12.into(), DEFAULT_THETA_DEG, &one).unwrap();
        assert_eq!(con.de, BigRational::new(5.into(), 4.into()));
        assert_eq!(
            con.cube_defect() + BigRational::from_integer(2.into()),
            BigRational::new(125.into(), 64.into())
        );
        assert!(con.parallel_defect().is_zero());
        assert_eq!(con.c.x, BigRational::from_integer(27.into()));
        // |CE| = 27/12, so E = (27 + 9/4·3/5, 9/4·4/5)
        assert_eq!(
            con.e,
            Point::new(
                BigRational::new(567.into(), 20.into()),
                BigRational::new(9.into(), 5.into())
            )
        );
    }

    #[test]
    fn equal_counts_give_unit_segment() {
        let con = construct(
            &7.into(),
            &7.into(),
            90.0,
            &BigRational::from_integer(3.into()),
        )
        .unwrap();
        assert!(con.de.is_one());
        assert_eq!(con.de_length(), BigRational::from_integer(3.into()));
    }

    #[test]
    fn construction_errors() {
        let one = BigRational::one();
        assert!(matches!(
            construct(&1.into(), &0.into(), 60.0, &one),
            Err(Error::NoRedSegments)
        ));
        assert!(matches!(
            construct(&1.into(), &1.into(), 200.0, &one),
            Err(Error::BadAngle(_))
        ));
        assert!(matches!(
            construct(&1.into(), &1.into(), 60.0, &BigRational::zero()),
            Err(Error::BadUnit)
        ));
    }

    #[test]
    fn zero_iterations_is_one_blue_segment() {
        let t = trace(&DelianOptions {
            iterations: 0,
            ..DelianOptions::default()
        })
        .unwrap();
        assert!(t.construction.is_none());
        let svg = render_svg(&t);
        assert_eq!(svg.matches("<line").count(), 1);
        assert!(svg.contains(r#"stroke="blue""#));
    }
}
