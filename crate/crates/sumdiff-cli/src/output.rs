//! Record rendering. One flat record per (n, p) run, as CSV with a fixed
//! column order or as a JSON array. Floats are written round-trip exact:
//! 17 significant digits in CSV, shortest round-trip in JSON.

use serde::Serialize;
use sumdiff::{ExactLaw, HuntResult, TrialStats};

pub const CSV_HEADER: &str = "n,p,trials,frac_diff_dom,frac_sum_dom,frac_balanced,\
mean_s1,var_s1,mean_s2,var_s2,mean_card,var_card,seed";

/// The shared record schema. `trials = 0` marks enumeration (oracle)
/// rows, which are exact rather than sampled.
#[derive(Debug, Serialize)]
pub struct Record {
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub frac_diff_dom: f64,
    pub frac_sum_dom: f64,
    pub frac_balanced: f64,
    pub mean_s1: f64,
    pub var_s1: f64,
    pub mean_s2: f64,
    pub var_s2: f64,
    pub mean_card: f64,
    pub var_card: f64,
    pub seed: u64,
}

impl Record {
    pub fn from_stats(stats: &TrialStats) -> Record {
        let t = stats.trials as f64;
        let frac = |count: u64| if stats.trials == 0 { 0.0 } else { count as f64 / t };
        Record {
            n: stats.params.n(),
            p: stats.params.p(),
            trials: stats.trials,
            frac_diff_dom: frac(stats.count_diff_dominant),
            frac_sum_dom: frac(stats.count_sum_dominant),
            frac_balanced: frac(stats.count_balanced),
            mean_s1: stats.mean_s1,
            var_s1: stats.var_s1,
            mean_s2: stats.mean_s2,
            var_s2: stats.var_s2,
            mean_card: stats.mean_card,
            var_card: stats.var_card,
            seed: stats.master_seed,
        }
    }

    /// Oracle rows: dominance probabilities and exact moments; the
    /// cardinality is Binomial(n, p), so its moments are closed-form.
    pub fn from_exact_law(law: &ExactLaw, seed: u64) -> Record {
        let n = law.params.n();
        let p = law.params.p();
        Record {
            n,
            p,
            trials: 0,
            frac_diff_dom: law.p_diff_dominant,
            frac_sum_dom: law.p_sum_dominant,
            frac_balanced: law.p_balanced,
            mean_s1: law.e_s1,
            var_s1: law.var_s1,
            mean_s2: law.e_s2,
            var_s2: law.var_s2,
            mean_card: n as f64 * p,
            var_card: n as f64 * p * (1.0 - p),
            seed,
        }
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.n,
            self.p,
            self.trials,
            self.frac_diff_dom,
            self.frac_sum_dom,
            self.frac_balanced,
            self.mean_s1,
            self.var_s1,
            self.mean_s2,
            self.var_s2,
            self.mean_card,
            self.var_card,
            self.seed
        )
    }
}

/// A record plus the hunt-only payload; only the JSON form carries the
/// witness sets (CSV keeps the fixed schema).
#[derive(Debug, Serialize)]
pub struct HuntRecord {
    #[serde(flatten)]
    pub record: Record,
    pub hits: u64,
    pub capped: bool,
    pub witnesses: Vec<Vec<usize>>,
}

impl HuntRecord {
    pub fn new(stats: &TrialStats, hunt: &HuntResult) -> HuntRecord {
        HuntRecord {
            record: Record::from_stats(stats),
            hits: hunt.hits,
            capped: hunt.capped,
            witnesses: hunt.witnesses.iter().map(|w| w.to_vec()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn render_records(records: &[Record], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in records {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut out =
                serde_json::to_string_pretty(records).expect("records serialize");
            out.push('\n');
            out
        }
    }
}

pub fn render_hunt(hunt: &HuntRecord, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            out.push_str(&hunt.record.csv_row());
            out.push('\n');
            out
        }
        Format::Json => {
            let mut out =
                serde_json::to_string_pretty(&[hunt]).expect("hunt serializes");
            out.push('\n');
            out
        }
    }
}
