//! Unit-gate area and delay model for residue-to-binary converters.
//!
//! Four designs are modelled: this crate's converter for
//! `{2^n, 2^2n - 1, 2^2n + 1}`, two converters for four- and five-moduli sets
//! with the same dynamic range (`Ref1`, `Ref9`), and an adder-based converter
//! for `{2^m - 1, 2^m, 2^m + 1}` (`Ref11`). Only gate counts and delay paths
//! are modelled; none of the reference converters is implemented functionally.
//!
//! # Calibration
//!
//! Primitive gates follow the usual unit-gate convention (NOT/AND/OR area 1,
//! XOR area 2; inverter/AND delay 1, XOR/FA/MUX2 delay 2). Composite cells and
//! the modular adder are not pinned down by that convention, so their areas
//! were fitted to the published comparison of this converter against `Ref11`:
//!
//! * full adder 7 (two XOR, two AND, one OR), XOR/AND and XNOR/OR pairs 3,
//!   half adder 3, 2-to-1 mux 2;
//! * parallel-prefix modulo `2^w - 1` adder: `A(w) = 3 w ceil(log2 w) + 4 w`.
//!
//! With these values the model reproduces all eight area totals of that
//! comparison (151/136, 341/298, 674/604, 1400/1330). The adder delay is
//! `t(w) = 2 ceil(log2 w) + 3`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, RnsError};

/// `ceil(log2 x)` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    assert!(x >= 1, "log2 of zero");
    64 - (x - 1).leading_zeros()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateCosts {
    pub delay_inv: u32,
    pub delay_and: u32,
    pub delay_xor: u32,
    pub delay_fa: u32,
    pub delay_mux2: u32,
    pub area_not: u64,
    pub area_and: u64,
    pub area_or: u64,
    pub area_xor: u64,
    pub area_xnor: u64,
    pub area_fa: u64,
    pub area_xor_and_pair: u64,
    pub area_xnor_or_pair: u64,
    pub area_ha: u64,
    pub area_mux2: u64,
}

impl GateCosts {
    pub const UNIT: GateCosts = GateCosts {
        delay_inv: 1,
        delay_and: 1,
        delay_xor: 2,
        delay_fa: 2,
        delay_mux2: 2,
        area_not: 1,
        area_and: 1,
        area_or: 1,
        area_xor: 2,
        area_xnor: 2,
        area_fa: 7,
        area_xor_and_pair: 3,
        area_xnor_or_pair: 3,
        area_ha: 3,
        area_mux2: 2,
    };

    /// A 4-to-1 mux built as a tree of three 2-to-1 muxes.
    pub fn area_mux4(&self) -> u64 {
        3 * self.area_mux2
    }

    pub fn delay_mux4(&self) -> u32 {
        2 * self.delay_mux2
    }

    /// Area of a `w`-bit parallel-prefix modulo `2^w - 1` adder.
    pub fn modular_adder_area(&self, w: u32) -> u64 {
        let w = u64::from(w);
        3 * w * u64::from(ceil_log2(w)) + 4 * w
    }

    /// Delay of a `w`-bit parallel-prefix modulo `2^w - 1` adder.
    pub fn modular_adder_delay(&self, w: u32) -> u32 {
        2 * ceil_log2(u64::from(w)) + 3
    }
}

impl Default for GateCosts {
    fn default() -> Self {
        GateCosts::UNIT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConverterDesign {
    /// `{2^n, 2^2n - 1, 2^2n + 1}`, parameter `n`.
    Ours(u32),
    /// `{2^n - 1, 2^n, 2^n + 1, 2^2n + 1}`, parameter `n`.
    Ref1(u32),
    /// `{2^n, 2^n - 1, 2^n + 1, 2^n - 2^((n+1)/2) + 1, 2^n + 2^((n+1)/2) + 1}`, parameter `n`.
    Ref9(u32),
    /// `{2^m - 1, 2^m, 2^m + 1}`, parameter `m`.
    Ref11(u32),
}

impl ConverterDesign {
    pub fn size(&self) -> u32 {
        match *self {
            ConverterDesign::Ours(s)
            | ConverterDesign::Ref1(s)
            | ConverterDesign::Ref9(s)
            | ConverterDesign::Ref11(s) => s,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ConverterDesign::Ours(_) => "ours",
            ConverterDesign::Ref1(_) => "ref1",
            ConverterDesign::Ref9(_) => "ref9",
            ConverterDesign::Ref11(_) => "ref11",
        }
    }

    fn validate(&self) -> Result<u32> {
        match self.size() {
            0 => Err(RnsError::InvalidParameter(format!(
                "{} converter size must be at least 1",
                self.label()
            ))),
            s => Ok(s),
        }
    }
}

impl fmt::Display for ConverterDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if matches!(self, ConverterDesign::Ref11(_)) {
            "m"
        } else {
            "n"
        };
        write!(f, "{}({}={})", self.label(), p, self.size())
    }
}

/// Gate inventory of one converter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HwBill {
    /// Operand-preparation inverters.
    pub inverters: u64,
    pub full_adders: u64,
    pub xor_and_pairs: u64,
    pub xnor_or_pairs: u64,
    pub extra_inverters: u64,
    pub xor_gates: u64,
    pub half_adders: u64,
    pub mux2: u64,
    pub mux4: u64,
    /// Width of the final modular adder.
    pub adder_width: u32,
    /// Some counts are published only as approximations.
    pub approximate: bool,
}

pub fn hw_bill(design: ConverterDesign) -> Result<HwBill> {
    let s = u64::from(design.validate()?);
    let bill = match design {
        ConverterDesign::Ours(n) => HwBill {
            inverters: 3 * s + 1,
            full_adders: s + 2,
            xor_and_pairs: 2 * s - 1,
            xnor_or_pairs: s - 1,
            adder_width: 4 * n,
            ..HwBill::default()
        },
        ConverterDesign::Ref1(n) => HwBill {
            inverters: 5 * s + 3,
            full_adders: 7 * s + 6,
            xor_and_pairs: 2 * s - 1,
            xnor_or_pairs: 4 * s,
            // 2n - 3 is negative at n = 1; clamp.
            extra_inverters: (2 * s).saturating_sub(3),
            adder_width: 4 * n,
            ..HwBill::default()
        },
        ConverterDesign::Ref9(n) => HwBill {
            inverters: 4 * s,
            full_adders: 15 * s,
            xor_and_pairs: 7 * s,
            xnor_or_pairs: 2 * s,
            mux4: 1,
            adder_width: 4 * n,
            approximate: true,
            ..HwBill::default()
        },
        ConverterDesign::Ref11(m) => HwBill {
            inverters: 2 * s + 1,
            full_adders: 2 * s,
            xor_gates: 1,
            half_adders: 1,
            mux2: 2,
            adder_width: 2 * m,
            ..HwBill::default()
        },
    };
    Ok(bill)
}

/// Unit-gate area of a bill, including its modular adder.
pub fn area_total(bill: &HwBill, costs: &GateCosts) -> u64 {
    bill.inverters * costs.area_not
        + bill.full_adders * costs.area_fa
        + bill.xor_and_pairs * costs.area_xor_and_pair
        + bill.xnor_or_pairs * costs.area_xnor_or_pair
        + bill.extra_inverters * costs.area_not
        + bill.xor_gates * costs.area_xor
        + bill.half_adders * costs.area_ha
        + bill.mux2 * costs.area_mux2
        + bill.mux4 * costs.area_mux4()
        + costs.modular_adder_area(bill.adder_width)
}

/// Terms on the critical path of a converter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DelayBreakdown {
    pub adder_width: u32,
    pub adder: u32,
    pub inverter: u32,
    pub mux: u32,
    /// Number of full-adder levels on the path.
    pub fa_levels: u32,
    pub fa: u32,
}

impl DelayBreakdown {
    pub fn total(&self) -> u32 {
        self.adder + self.inverter + self.mux + self.fa
    }
}

pub fn delay_breakdown(design: ConverterDesign, costs: &GateCosts) -> Result<DelayBreakdown> {
    let s = design.validate()?;
    let (adder_width, mux, fa_levels) = match design {
        ConverterDesign::Ours(_) => (4 * s, 0, 1),
        ConverterDesign::Ref1(_) => (4 * s, 0, 3),
        ConverterDesign::Ref9(_) => (4 * s, 0, 4),
        ConverterDesign::Ref11(_) => (2 * s, costs.delay_mux2, 1),
    };
    Ok(DelayBreakdown {
        adder_width,
        adder: costs.modular_adder_delay(adder_width),
        inverter: costs.delay_inv,
        mux,
        fa_levels,
        fa: fa_levels * costs.delay_fa,
    })
}

/// Unit-gate delay of a converter's critical path.
pub fn delay_total(design: ConverterDesign) -> Result<u32> {
    delay_breakdown(design, &GateCosts::UNIT).map(|d| d.total())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelAdder {
    /// Parallel-prefix modulo `2^2n + 1` adder.
    Mod2Pow2nPlus1,
    /// Modulo `2^n + 2^((n+1)/2) + 1` adder; the formula is an approximation.
    ModHiasat,
}

/// Delay of a single modular addition in the given channel.
pub fn channel_adder_delay(kind: ChannelAdder, n: u32) -> Result<u32> {
    if n == 0 {
        return Err(RnsError::InvalidParameter("n must be at least 1".into()));
    }
    let n = u64::from(n);
    Ok(match kind {
        ChannelAdder::Mod2Pow2nPlus1 => 2 * ceil_log2(2 * n) + 6,
        ChannelAdder::ModHiasat => 4 * ceil_log2(n) + 7,
    })
}

/// `m` giving `{2^m - 1, 2^m, 2^m + 1}` a dynamic range close to `2^5n`: `floor(5n / 3)`.
pub fn comparable_m(n: u32) -> u32 {
    5 * n / 3
}

/// Which branch of the delay comparison against `Ref11` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DelayCase {
    /// `ceil(log2 2n) = ceil(log2 m)`: this converter is faster.
    Faster,
    /// `ceil(log2 2n) = ceil(log2 m) + 1`: equal delay.
    Equal,
    Other,
}

pub fn delay_case(n: u32, m: u32) -> DelayCase {
    let a = ceil_log2(2 * u64::from(n));
    let b = ceil_log2(u64::from(m.max(1)));
    if a == b {
        DelayCase::Faster
    } else if a == b + 1 {
        DelayCase::Equal
    } else {
        DelayCase::Other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Census {
    pub faster: u32,
    pub equal: u32,
    pub other: u32,
}

impl Census {
    pub fn total(&self) -> u32 {
        self.faster + self.equal + self.other
    }

    pub fn faster_pct(&self) -> f64 {
        100.0 * f64::from(self.faster) / f64::from(self.total())
    }

    pub fn equal_pct(&self) -> f64 {
        100.0 * f64::from(self.equal) / f64::from(self.total())
    }
}

/// Counts delay cases over `ns` with `m = comparable_m(n)`.
pub fn delay_case_census(ns: impl IntoIterator<Item = u32>) -> Census {
    let mut c = Census::default();
    for n in ns {
        match delay_case(n, comparable_m(n)) {
            DelayCase::Faster => c.faster += 1,
            DelayCase::Equal => c.equal += 1,
            DelayCase::Other => c.other += 1,
        }
    }
    c
}

/// Percentage truncated toward zero to a fixed number of decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Percent {
    scaled: i128,
    decimals: u32,
}

impl Percent {
    /// `num / den * 100`, truncated.
    pub fn truncated(num: i128, den: i128, decimals: u32) -> Percent {
        assert!(den != 0, "percentage of zero");
        Percent {
            scaled: num * 100 * 10i128.pow(decimals) / den,
            decimals,
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.scaled as f64 / 10f64.powi(self.decimals as i32)
    }
}

impl fmt::Display for Percent {
    /// Trailing fractional zeros are dropped, so `10.0` prints as `10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = 10i128.pow(self.decimals);
        let sign = if self.scaled < 0 { "-" } else { "" };
        let abs = self.scaled.abs();
        let frac = format!("{:0width$}", abs % unit, width = self.decimals as usize);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            write!(f, "{sign}{}", abs / unit)
        } else {
            write!(f, "{sign}{}.{frac}", abs / unit)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostReport {
    pub design: ConverterDesign,
    pub bill: HwBill,
    pub area: u64,
    pub delay: u32,
}

pub fn cost_report(design: ConverterDesign, costs: &GateCosts) -> Result<CostReport> {
    let bill = hw_bill(design)?;
    Ok(CostReport {
        design,
        bill,
        area: area_total(&bill, costs),
        delay: delay_breakdown(design, costs)?.total(),
    })
}

/// One row of the comparison against the `{2^m - 1, 2^m, 2^m + 1}` converter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparisonRow {
    /// Nominal dynamic range label in bits.
    pub dr_bits: u32,
    pub ours: CostReport,
    pub reference: CostReport,
    /// `(A_ours - A_ref) / A_ref`, two decimals.
    pub extra_area: Percent,
    /// `(t_ref - t_ours) / t_ref`, one decimal.
    pub speedup: Percent,
}

impl ComparisonRow {
    pub fn n(&self) -> u32 {
        self.ours.design.size()
    }

    pub fn m(&self) -> u32 {
        self.reference.design.size()
    }
}

pub fn compare(dr_bits: u32, n: u32, m: u32, costs: &GateCosts) -> Result<ComparisonRow> {
    let ours = cost_report(ConverterDesign::Ours(n), costs)?;
    let reference = cost_report(ConverterDesign::Ref11(m), costs)?;
    let a = (i128::from(ours.area), i128::from(reference.area));
    let t = (i128::from(ours.delay), i128::from(reference.delay));
    Ok(ComparisonRow {
        dr_bits,
        ours,
        reference,
        extra_area: Percent::truncated(a.0 - a.1, a.1, 2),
        speedup: Percent::truncated(t.1 - t.0, t.1, 1),
    })
}

/// Dynamic-range label and `(n, m)` pairs of the published comparison.
pub const TABLE4_POINTS: [(u32, u32, u32); 4] = [(8, 2, 3), (16, 4, 6), (32, 7, 11), (64, 13, 22)];

/// The area/delay comparison for the 8-, 16-, 32- and 64-bit dynamic ranges.
pub fn table4() -> Vec<ComparisonRow> {
    TABLE4_POINTS
        .iter()
        .map(|&(dr, n, m)| compare(dr, n, m, &GateCosts::UNIT).expect("fixed table points are valid"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

impl FromStr for TableFormat {
    type Err = RnsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(TableFormat::Text),
            "csv" => Ok(TableFormat::Csv),
            other => Err(RnsError::InvalidParameter(format!("unknown format '{other}'"))),
        }
    }
}

pub const TABLE4_CSV_HEADER: &str = "dr_bits,n,m,a_ours,a_ref11,extra_area_pct,t_ours,t_ref11,speedup_pct";

/// Renders rows as CSV or a right-aligned text table. Output ends with a newline.
fn render(header: &[&str], rows: &[Vec<String>], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
        }
        TableFormat::Text => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for r in rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: &mut dyn Iterator<Item = &str>| {
                let s: Vec<String> = cells
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}", w = *w))
                    .collect();
                s.join("  ")
            };
            out.push_str(&line(&mut header.iter().copied()));
            out.push('\n');
            let rule: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            out.push_str(&"-".repeat(rule));
            out.push('\n');
            for r in rows {
                out.push_str(&line(&mut r.iter().map(String::as_str)));
                out.push('\n');
            }
        }
    }
    out
}

/// Renders comparison rows. The CSV form is byte-stable.
pub fn emit_table(rows: &[ComparisonRow], format: TableFormat) -> Result<String> {
    if rows.is_empty() {
        return Err(RnsError::InvalidParameter("no rows to emit".into()));
    }
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.dr_bits.to_string(),
                r.n().to_string(),
                r.m().to_string(),
                r.ours.area.to_string(),
                r.reference.area.to_string(),
                r.extra_area.to_string(),
                r.ours.delay.to_string(),
                r.reference.delay.to_string(),
                r.speedup.to_string(),
            ]
        })
        .collect();
    let header: Vec<&str> = match format {
        TableFormat::Csv => TABLE4_CSV_HEADER.split(',').collect(),
        TableFormat::Text => vec![
            "DR",
            "n",
            "m",
            "A_ours",
            "A_ref11",
            "Extra Area%",
            "t_ours",
            "t_ref11",
            "Speed-up%",
        ],
    };
    Ok(render(&header, &body, format))
}

/// Hardware bills of all four designs.
pub fn emit_bills(n: u32, m: u32, format: TableFormat) -> Result<String> {
    let designs = [
        ConverterDesign::Ours(n),
        ConverterDesign::Ref1(n),
        ConverterDesign::Ref9(n),
        ConverterDesign::Ref11(m),
    ];
    let mut body = Vec::new();
    for d in designs {
        let r = cost_report(d, &GateCosts::UNIT)?;
        let b = r.bill;
        let mux = match (b.mux2, b.mux4) {
            (0, 0) => "-".to_string(),
            (k, 0) => format!("{k}x mux2"),
            (0, k) => format!("{k}x mux4"),
            (a, c) => format!("{a}x mux2 + {c}x mux4"),
        };
        body.push(vec![
            d.label().to_string(),
            d.size().to_string(),
            b.inverters.to_string(),
            b.full_adders.to_string(),
            b.xor_and_pairs.to_string(),
            b.xnor_or_pairs.to_string(),
            b.extra_inverters.to_string(),
            b.xor_gates.to_string(),
            b.half_adders.to_string(),
            mux,
            b.adder_width.to_string(),
            r.area.to_string(),
            if b.approximate { "approx" } else { "exact" }.to_string(),
        ]);
    }
    let header = [
        "design",
        "size",
        "inverters",
        "full_adders",
        "xor_and_pairs",
        "xnor_or_pairs",
        "extra_inverters",
        "xor",
        "half_adders",
        "mux",
        "adder_width",
        "area",
        "counts",
    ];
    Ok(render(&header, &body, format))
}

/// Critical-path delays of all four designs.
pub fn emit_delays(n: u32, m: u32, format: TableFormat) -> Result<String> {
    let designs = [
        ConverterDesign::Ours(n),
        ConverterDesign::Ref1(n),
        ConverterDesign::Ref9(n),
        ConverterDesign::Ref11(m),
    ];
    let mut body = Vec::new();
    for d in designs {
        let b = delay_breakdown(d, &GateCosts::UNIT)?;
        let mut path = format!("t_MA({})+t_NOT", b.adder_width);
        if b.mux > 0 {
            path.push_str("+t_MUX");
        }
        match b.fa_levels {
            0 => {}
            1 => path.push_str("+t_FA"),
            k => path.push_str(&format!("+{k}t_FA")),
        }
        body.push(vec![
            d.label().to_string(),
            d.size().to_string(),
            path,
            b.adder.to_string(),
            b.total().to_string(),
        ]);
    }
    let case = match delay_case(n, m) {
        DelayCase::Faster => "faster",
        DelayCase::Equal => "equal",
        DelayCase::Other => "other",
    };
    let mut out = render(&["design", "size", "path", "adder_delay", "delay"], &body, format);
    if format == TableFormat::Text {
        out.push_str(&format!("case vs ref11 (n={n}, m={m}): {case}\n"));
    }
    Ok(out)
}

/// Modular addition delay in `2^2n + 1` versus `2^n + 2^((n+1)/2) + 1`.
pub fn emit_channel_delays(ns: &[u32], format: TableFormat) -> Result<String> {
    let mut body = Vec::new();
    for &n in ns {
        body.push(vec![
            n.to_string(),
            channel_adder_delay(ChannelAdder::Mod2Pow2nPlus1, n)?.to_string(),
            channel_adder_delay(ChannelAdder::ModHiasat, n)?.to_string(),
        ]);
    }
    Ok(render(
        &["n", "mod_2pow2n_plus1", "mod_hiasat_approx"],
        &body,
        format,
    ))
}
