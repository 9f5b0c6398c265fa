//! Command implementations behind the `ldplpp` binary: parameter parsing and
//! validation, the table commands, the verification campaign, and JSON/CSV
//! emission with a metadata header.

mod commands;
mod verify;

pub use commands::{
    cmd_asymptote, cmd_converge, cmd_exact, cmd_simulate, cmd_uptail, AsymptoteRow, ConvergeRow, ExactRow,
    HistogramRow, SampleRow, SimulationOutput, UptailRow,
};
pub use verify::{cmd_verify, CheckRecord, CheckStatus, Fault, VerificationReport};

use std::io::Write;
use std::path::PathBuf;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{parse_rational, Precision, Real, Value};

pub const TOOL_NAME: &str = "ldplpp";
pub const DEFAULT_DIGITS: u32 = Precision::DEFAULT_DIGITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Exact,
    Verify,
    Converge,
    Uptail,
    Simulate,
    Asymptote,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Raw parameters as given on the command line; echoed verbatim in the output header.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Params {
    pub q2: Option<String>,
    pub gamma: Option<String>,
    pub delta: Option<String>,
    pub nshift: i64,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub ell: Option<u32>,
    pub n_list: Vec<u32>,
    pub trials: Option<usize>,
    pub seed: u64,
    /// schur, jue, meixner, tue or all (exact only).
    pub route: Option<String>,
    /// Histogram bins (simulate only).
    pub bins: usize,
    /// Emit per-value counts of G instead of the histogram (simulate only).
    pub raw: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub precision_digits: u32,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, params: Params) -> Self {
        RunConfig { command, params, precision_digits: DEFAULT_DIGITS, format: OutputFormat::Json, out: None }
    }

    pub fn precision(&self) -> Precision {
        Precision::digits(self.precision_digits)
    }

    /// Checks everything the command needs before any computation starts.
    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        if self.precision_digits < 10 {
            return Err(Error::domain("--precision must be at least 10 digits"));
        }
        let needs_q2 = !matches!(self.command, Command::Verify);
        if needs_q2 {
            self.q2()?;
        }
        match self.command {
            Command::Exact => {
                need(p.n, "--n")?;
                need(p.m, "--m")?;
                need(p.ell, "--ell")?;
                self.route_names()?;
            }
            Command::Verify => {}
            Command::Converge | Command::Uptail | Command::Asymptote => {
                self.gamma()?;
                self.delta()?;
                if p.n_list.is_empty() {
                    return Err(Error::domain("--N-list must name at least one N"));
                }
                if p.n_list.windows(2).any(|w| w[0] >= w[1]) || p.n_list[0] == 0 {
                    return Err(Error::domain("--N-list must be positive and strictly ascending"));
                }
                for &nn in &p.n_list {
                    self.grid_size(nn)?;
                }
            }
            Command::Simulate => {
                if p.trials.unwrap_or(0) == 0 {
                    return Err(Error::domain("--trials must be at least 1"));
                }
                self.simulation_sides()?;
            }
        }
        Ok(())
    }

    pub fn q2(&self) -> Result<Value> {
        let s = self.params.q2.as_deref().ok_or_else(|| Error::domain("--q2 is required"))?;
        let v = parse_value(s, self.precision())?;
        let f = v.to_f64();
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::domain(format!("q^2 must lie in (0, 1), got {s}")));
        }
        Ok(v)
    }

    /// q = sqrt(q^2) at the working precision.
    pub fn q(&self) -> Result<Real> {
        Ok(self.q2()?.to_real(self.precision()).sqrt())
    }

    pub fn gamma(&self) -> Result<Real> {
        let g = match &self.params.gamma {
            Some(s) => parse_value(s, self.precision())?.to_real(self.precision()),
            None => self.precision().real(1),
        };
        if g < 1 {
            return Err(Error::domain("gamma must be at least 1"));
        }
        Ok(g)
    }

    pub fn delta(&self) -> Result<Real> {
        let s = self.params.delta.as_deref().ok_or_else(|| Error::domain("--delta is required"))?;
        let d = parse_value(s, self.precision())?.to_real(self.precision());
        if d <= 0 {
            return Err(Error::domain("delta must be positive"));
        }
        Ok(d)
    }

    pub fn nshift(&self) -> Real {
        self.precision().real(self.params.nshift)
    }

    /// (n, m) = (floor(gamma N) + nshift, N).
    pub fn grid_size(&self, big_n: u32) -> Result<(u32, u32)> {
        let g = Float::with_val(self.precision().bits(), self.gamma()? * big_n);
        let n = g.floor().to_f64() as i64 + self.params.nshift;
        if n < big_n as i64 {
            return Err(Error::domain(format!("gamma N + nshift = {n} is below N = {big_n}")));
        }
        Ok((n as u32, big_n))
    }

    /// floor(delta N), the integer threshold used for a given N.
    pub fn threshold(&self, big_n: u32) -> Result<u32> {
        let d = Float::with_val(self.precision().bits(), self.delta()? * big_n);
        Ok(d.floor().to_f64() as u32)
    }

    pub fn route_names(&self) -> Result<Vec<&'static str>> {
        match self.params.route.as_deref().unwrap_or("all") {
            "all" => Ok(vec!["schur", "jue", "meixner"]),
            "schur" => Ok(vec!["schur"]),
            "jue" => Ok(vec!["jue"]),
            "meixner" => Ok(vec!["meixner"]),
            "tue" => Ok(vec!["tue"]),
            other => Err(Error::domain(format!("unknown route {other:?}"))),
        }
    }

    /// Grid sides for simulation: --n/--m when given, else (floor(gamma N) + nshift, N)
    /// for the first entry of the N-list.
    pub fn simulation_sides(&self) -> Result<(u32, u32)> {
        match (self.params.n, self.params.m) {
            (Some(n), Some(m)) if n > 0 && m > 0 => Ok((n, m)),
            (Some(_), Some(_)) => Err(Error::domain("grid sides must be positive")),
            _ => {
                let nn = *self.params.n_list.first().ok_or_else(|| Error::domain("give --n and --m, or --N-list"))?;
                self.grid_size(nn)
            }
        }
    }

    pub fn meta(&self) -> Meta {
        Meta {
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command,
            precision_digits: self.precision_digits,
            seed: self.params.seed,
            params: self.params.clone(),
            extra: serde_json::Map::new(),
        }
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::domain(format!("{flag} is required")))
}

/// "p/q" and integers are exact; decimals become floats at the working precision.
pub fn parse_value(s: &str, prec: Precision) -> Result<Value> {
    let s = s.trim();
    let bad = || Error::domain(format!("cannot parse {s:?} as a number"));
    if s.contains(['.', 'e', 'E']) {
        let parsed = Float::parse(s).map_err(|_| bad())?;
        return Ok(Value::Approx(Float::with_val(prec.bits(), parsed)));
    }
    parse_rational(s).map(Value::Exact).ok_or_else(bad)
}

/// Decimal rendering of a high-precision value.
pub fn fmt_real(x: &Real, digits: u32) -> String {
    x.to_string_radix(10, Some(digits as usize))
}

/// Header written ahead of every table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub precision_digits: u32,
    pub seed: u64,
    pub params: Params,
    /// Command-specific summary fields.
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table<R> {
    pub meta: Meta,
    pub rows: Vec<R>,
}

impl<R: Serialize> Table<R> {
    pub fn write<W: Write>(&self, format: OutputFormat, mut w: W) -> Result<()> {
        match format {
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut w, self)?;
                writeln!(w)?;
            }
            OutputFormat::Csv => {
                let meta = serde_json::to_value(&self.meta)?;
                if let serde_json::Value::Object(map) = meta {
                    for (k, v) in map {
                        let v = match v {
                            serde_json::Value::String(s) => s,
                            other => other.to_string(),
                        };
                        writeln!(w, "# {k}: {v}")?;
                    }
                }
                let mut cw = csv::Writer::from_writer(&mut w);
                for r in &self.rows {
                    cw.serialize(r)?;
                }
                cw.flush()?;
            }
        }
        Ok(())
    }

    pub fn to_string(&self, format: OutputFormat) -> Result<String> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Serialize(e.to_string()))
    }

    /// Writes to `out`, or to stdout when no path is set.
    pub fn emit(&self, cfg: &RunConfig) -> Result<()> {
        match &cfg.out {
            Some(path) => {
                let f = std::io::BufWriter::new(std::fs::File::create(path)?);
                self.write(cfg.format, f)
            }
            None => self.write(cfg.format, std::io::stdout().lock()),
        }
    }
}
