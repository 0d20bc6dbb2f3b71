//! Reader-study statistics: inter-session percent agreement with Wilson score
//! intervals, agreement as a 0/1 population, pooled-variance t-tests with an
//! F-test variance check, and mean ± CI summaries of reading time and ease.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use statrs::distribution::{ContinuousCDF, FisherSnedecor, Normal, StudentsT};

use crate::aging::AgingMode;
use crate::error::{Error, Result};

/// Header of the score CSV, in column order.
pub const SCORES_CSV_HEADER: [&str; 6] = [
    "case_id",
    "aging_condition",
    "session1_score",
    "session2_score",
    "tts_seconds",
    "eor",
];

/// Diagnostic category: negative (0 or 1+) or positive (2+ or 3+).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Score {
    Negative,
    Positive,
}

impl Score {
    pub const fn as_str(self) -> &'static str {
        match self {
            Self::Negative => "neg",
            Self::Positive => "pos",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord {
    pub case_id: String,
    /// Display aging applied in the first session.
    pub condition: AgingMode,
    pub session1: Score,
    pub session2: Score,
    /// Time to score, seconds.
    pub tts_seconds: Option<f64>,
    /// Ease of reading, 1 (hard) to 10 (easy).
    pub eor: Option<f64>,
}

impl ScoreRecord {
    pub fn agrees(&self) -> bool {
        self.session1 == self.session2
    }
}

/// Parses the score CSV. Blank `tts_seconds` / `eor` fields are allowed.
pub fn load_scores<R: Read>(source: R, source_name: &str) -> Result<Vec<ScoreRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);
    let schema = |line: u64, message: String| {
        Error::Schema(format!("{source_name}: line {line}: {message}"))
    };

    let header = reader.headers().map_err(|e| schema(1, e.to_string()))?.clone();
    if header.is_empty() {
        return Err(Error::Schema(format!(
            "{source_name}: empty file, expected header `{}`",
            SCORES_CSV_HEADER.join(",")
        )));
    }
    let found: Vec<&str> = header.iter().collect();
    if found != SCORES_CSV_HEADER {
        return Err(schema(
            header.position().map_or(1, |p| p.line()),
            format!(
                "expected header `{}`, found `{}`",
                SCORES_CSV_HEADER.join(","),
                found.join(",")
            ),
        ));
    }

    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| schema(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != SCORES_CSV_HEADER.len() {
            return Err(schema(
                line,
                format!("expected {} fields, found {}", SCORES_CSV_HEADER.len(), row.len()),
            ));
        }
        let case_id = row[0].to_owned();
        if case_id.is_empty() {
            return Err(schema(line, "field `case_id` is empty".into()));
        }
        let condition = match &row[1] {
            "none" => AgingMode::None,
            "chroma" => AgingMode::ChromaOnly,
            "chroma_luma" => AgingMode::ChromaPlusLuma,
            other => {
                return Err(Error::UnknownCondition {
                    source_name: source_name.to_owned(),
                    line,
                    value: other.to_owned(),
                })
            }
        };
        let score = |field: &str, name: &str| match field {
            "neg" => Ok(Score::Negative),
            "pos" => Ok(Score::Positive),
            other => Err(schema(line, format!("field `{name}`: expected neg or pos, found `{other}`"))),
        };
        let optional = |field: &str, name: &str| -> Result<Option<f64>> {
            if field.is_empty() {
                return Ok(None);
            }
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Some)
                .ok_or_else(|| schema(line, format!("field `{name}`: cannot parse `{field}` as a number")))
        };
        let tts_seconds = optional(&row[4], "tts_seconds")?;
        if tts_seconds.is_some_and(|t| t < 0.0) {
            return Err(schema(line, "field `tts_seconds`: must be non-negative".into()));
        }
        let eor = optional(&row[5], "eor")?;
        if eor.is_some_and(|e| !(1.0..=10.0).contains(&e)) {
            return Err(schema(line, "field `eor`: must be within [1, 10]".into()));
        }
        out.push(ScoreRecord {
            case_id,
            condition,
            session1: score(&row[2], "session1_score")?,
            session2: score(&row[3], "session2_score")?,
            tts_seconds,
            eor,
        });
    }
    if out.is_empty() {
        return Err(Error::Schema(format!("{source_name}: no score rows")));
    }
    Ok(out)
}

/// Agreement counts of one aging condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionAgreement {
    pub n_agree: u64,
    pub n_disagree: u64,
}

impl ConditionAgreement {
    pub fn total(&self) -> u64 {
        self.n_agree + self.n_disagree
    }

    /// One 1.0 per agreeing case followed by one 0.0 per disagreeing case;
    /// its mean is the percent agreement.
    pub fn population(&self) -> Vec<f64> {
        let mut v = vec![1.0; self.n_agree as usize];
        v.resize(self.total() as usize, 0.0);
        v
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AgreementData {
    pub by_condition: BTreeMap<AgingMode, ConditionAgreement>,
}

impl AgreementData {
    pub fn from_records(records: &[ScoreRecord]) -> Self {
        let mut by_condition: BTreeMap<AgingMode, ConditionAgreement> = BTreeMap::new();
        for r in records {
            let e = by_condition.entry(r.condition).or_insert(ConditionAgreement {
                n_agree: 0,
                n_disagree: 0,
            });
            if r.agrees() {
                e.n_agree += 1;
            } else {
                e.n_disagree += 1;
            }
        }
        Self { by_condition }
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (AgingMode, u64, u64)>) -> Self {
        Self {
            by_condition: counts
                .into_iter()
                .map(|(c, n_agree, n_disagree)| (c, ConditionAgreement { n_agree, n_disagree }))
                .collect(),
        }
    }

    pub fn get(&self, condition: AgingMode) -> Option<ConditionAgreement> {
        self.by_condition.get(&condition).copied()
    }
}

/// Fraction of cases in `condition` scored the same in both sessions.
pub fn percent_agreement(d: &AgreementData, condition: AgingMode) -> Result<f64> {
    match d.get(condition) {
        Some(c) if c.total() > 0 => Ok(c.n_agree as f64 / c.total() as f64),
        _ => Err(Error::InvalidArgument(format!("no cases for condition `{condition}`"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonInterval {
    pub low: f64,
    pub high: f64,
    pub confidence: f64,
}

/// Two-sided standard normal quantile for a confidence level, e.g. 1.96 at 0.95.
pub fn normal_quantile_two_sided(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence must be in (0, 1), got {confidence}")));
    }
    let n = Normal::standard();
    Ok(n.inverse_cdf(1.0 - 0.5 * (1.0 - confidence)))
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, n: u64, confidence: f64) -> Result<WilsonInterval> {
    if n == 0 {
        return Err(Error::InvalidArgument("Wilson interval needs n >= 1".into()));
    }
    if successes > n {
        return Err(Error::InvalidArgument(format!("{successes} successes out of {n} trials")));
    }
    let z = normal_quantile_two_sided(confidence)?;
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    Ok(WilsonInterval {
        low: (center - half).clamp(0.0, p),
        high: (center + half).clamp(p, 1.0),
        confidence,
    })
}

/// Alternative hypothesis of a two-sample test on `mean(a) - mean(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alternative {
    TwoSided,
    /// `mean(a) > mean(b)`; null `mean(a) <= mean(b)`.
    Greater,
    /// `mean(a) < mean(b)`; null `mean(a) >= mean(b)`.
    Less,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    One,
    Two,
}

impl Alternative {
    pub fn tail(self) -> Tail {
        match self {
            Self::TwoSided => Tail::Two,
            Self::Greater | Self::Less => Tail::One,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: u64,
    pub p_value: f64,
    pub alternative: Alternative,
    pub pooled_variance: f64,
    pub mean_a: f64,
    pub mean_b: f64,
}

impl TTestResult {
    pub fn tail(&self) -> Tail {
        self.alternative.tail()
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Unbiased (n - 1) sample variance.
pub fn sample_variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
}

/// Student's two-sample t-test assuming equal variances.
pub fn t_test_unpaired(a: &[f64], b: &[f64], alternative: Alternative) -> Result<TTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "t-test needs at least 2 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mean_a, mean_b) = (mean(a), mean(b));
    let df = a.len() + b.len() - 2;
    let pooled_variance =
        ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / df as f64;
    if !(pooled_variance > 0.0) {
        return Err(Error::DegenerateTest("pooled variance is zero"));
    }
    let t = (mean_a - mean_b) / (pooled_variance * (1.0 / na + 1.0 / nb)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 2");
    let p_value = match alternative {
        Alternative::Greater => dist.sf(t),
        Alternative::Less => dist.cdf(t),
        Alternative::TwoSided => (2.0 * dist.sf(t.abs())).min(1.0),
    };
    Ok(TTestResult {
        t_statistic: t,
        degrees_of_freedom: df as u64,
        p_value,
        alternative,
        pooled_variance,
        mean_a,
        mean_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FTestResult {
    /// Larger sample variance over the smaller.
    pub f_statistic: f64,
    pub df_numerator: u64,
    pub df_denominator: u64,
    /// Two-tailed.
    pub p_value: f64,
}

/// Two-tailed F-test for equality of variances.
pub fn f_test_equal_variance(a: &[f64], b: &[f64]) -> Result<FTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "F-test needs at least 2 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (va, vb) = (sample_variance(a), sample_variance(b));
    if !(va > 0.0 && vb > 0.0) {
        return Err(Error::DegenerateTest("a sample has zero variance"));
    }
    let ((v_num, n_num), (v_den, n_den)) = if va >= vb {
        ((va, a.len()), (vb, b.len()))
    } else {
        ((vb, b.len()), (va, a.len()))
    };
    let f = v_num / v_den;
    let (d1, d2) = (n_num as u64 - 1, n_den as u64 - 1);
    let dist = FisherSnedecor::new(d1 as f64, d2 as f64).expect("positive degrees of freedom");
    Ok(FTestResult {
        f_statistic: f,
        df_numerator: d1,
        df_denominator: d2,
        p_value: (2.0 * dist.sf(f)).min(1.0),
    })
}

/// Mean with a normal-approximation interval `mean ± 1.96 s / sqrt(n)`,
/// `s` being the sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCi {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub half_width: f64,
}

impl MeanCi {
    pub fn from_values(v: &[f64]) -> Option<Self> {
        if v.is_empty() {
            return None;
        }
        let n = v.len();
        let m = mean(v);
        let std = if n > 1 { sample_variance(v).sqrt() } else { 0.0 };
        Some(Self {
            n,
            mean: m,
            std,
            half_width: 1.96 * std / (n as f64).sqrt(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSummary {
    pub condition: AgingMode,
    pub agreement: ConditionAgreement,
    pub percent_agreement: f64,
    pub wilson: WilsonInterval,
    pub tts: Option<MeanCi>,
    pub eor: Option<MeanCi>,
}

/// Outcome of one pairwise comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTest {
    pub a: AgingMode,
    pub b: AgingMode,
    pub t_test: std::result::Result<TTestResult, String>,
    /// Two-tailed F-test p-value, when both variances are positive.
    pub f_test_p: Option<f64>,
}

impl PairTest {
    fn run(a: AgingMode, b: AgingMode, xa: &[f64], xb: &[f64], alternative: Alternative) -> Self {
        Self {
            a,
            b,
            t_test: t_test_unpaired(xa, xb, alternative).map_err(|e| e.to_string()),
            f_test_p: f_test_equal_variance(xa, xb).ok().map(|f| f.p_value),
        }
    }

    pub fn rejects(&self, alpha: f64) -> Option<bool> {
        self.t_test.as_ref().ok().map(|t| t.p_value < alpha)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub alpha: f64,
    pub conditions: Vec<ConditionSummary>,
    /// Conditions with no records.
    pub missing: Vec<AgingMode>,
    /// One-tailed tests of `PA_a > PA_b` on the 0/1 agreement populations.
    pub agreement_tests: Vec<PairTest>,
    /// Two-tailed tests on time to score.
    pub tts_tests: Vec<PairTest>,
    /// Two-tailed tests on ease of reading.
    pub eor_tests: Vec<PairTest>,
}

const PAIRS: [(AgingMode, AgingMode); 3] = [
    (AgingMode::None, AgingMode::ChromaOnly),
    (AgingMode::None, AgingMode::ChromaPlusLuma),
    (AgingMode::ChromaOnly, AgingMode::ChromaPlusLuma),
];

pub fn analyze_study(records: &[ScoreRecord], alpha: f64) -> Result<StudyReport> {
    if records.is_empty() {
        return Err(Error::Empty("no score records"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must be in (0, 1), got {alpha}")));
    }
    let agreement = AgreementData::from_records(records);
    let values = |c: AgingMode, f: fn(&ScoreRecord) -> Option<f64>| -> Vec<f64> {
        records.iter().filter(|r| r.condition == c).filter_map(f).collect()
    };
    let tts_of = |r: &ScoreRecord| r.tts_seconds;
    let eor_of = |r: &ScoreRecord| r.eor;

    let mut conditions = Vec::new();
    let mut missing = Vec::new();
    for c in AgingMode::ALL {
        let Some(counts) = agreement.get(c) else {
            missing.push(c);
            continue;
        };
        conditions.push(ConditionSummary {
            condition: c,
            agreement: counts,
            percent_agreement: percent_agreement(&agreement, c)?,
            wilson: wilson_interval(counts.n_agree, counts.total(), 0.95)?,
            tts: MeanCi::from_values(&values(c, tts_of)),
            eor: MeanCi::from_values(&values(c, eor_of)),
        });
    }

    let mut agreement_tests = Vec::new();
    let mut tts_tests = Vec::new();
    let mut eor_tests = Vec::new();
    for (a, b) in PAIRS {
        let (Some(ca), Some(cb)) = (agreement.get(a), agreement.get(b)) else {
            continue;
        };
        agreement_tests.push(PairTest::run(a, b, &ca.population(), &cb.population(), Alternative::Greater));
        let (ta, tb) = (values(a, tts_of), values(b, tts_of));
        if !ta.is_empty() && !tb.is_empty() {
            tts_tests.push(PairTest::run(a, b, &ta, &tb, Alternative::TwoSided));
        }
        let (ea, eb) = (values(a, eor_of), values(b, eor_of));
        if !ea.is_empty() && !eb.is_empty() {
            eor_tests.push(PairTest::run(a, b, &ea, &eb, Alternative::TwoSided));
        }
    }

    Ok(StudyReport {
        alpha,
        conditions,
        missing,
        agreement_tests,
        tts_tests,
        eor_tests,
    })
}

impl StudyReport {
    pub fn summary(&self, c: AgingMode) -> Option<&ConditionSummary> {
        self.conditions.iter().find(|s| s.condition == c)
    }

    pub fn agreement_test(&self, a: AgingMode, b: AgingMode) -> Option<&PairTest> {
        self.agreement_tests.iter().find(|t| t.a == a && t.b == b)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "Percent agreement between sessions (95% Wilson CI)");
        for c in &self.conditions {
            let _ = writeln!(
                s,
                "  {:<12} agreed {:>4}  disagreed {:>4}  PA {:6.2}%  CI [{:.1}, {:.1}]",
                c.condition.as_str(),
                c.agreement.n_agree,
                c.agreement.n_disagree,
                100.0 * c.percent_agreement,
                100.0 * c.wilson.low,
                100.0 * c.wilson.high
            );
        }
        for m in &self.missing {
            let _ = writeln!(s, "  {:<12} missing (no records)", m.as_str());
        }
        let _ = writeln!(s, "One-tailed t-tests on agreement (null: PA_a <= PA_b, alpha = {})", self.alpha);
        write_tests(&mut s, &self.agreement_tests, self.alpha, "PA");
        for (label, field, tests) in [
            ("Time to score (s)", 0, &self.tts_tests),
            ("Ease of reading", 1, &self.eor_tests),
        ] {
            let rows: Vec<_> = self
                .conditions
                .iter()
                .filter_map(|c| if field == 0 { c.tts } else { c.eor }.map(|m| (c.condition, m)))
                .collect();
            if rows.is_empty() {
                continue;
            }
            let _ = writeln!(s, "{label}: mean ± 1.96·s/√n");
            for (c, m) in rows {
                let _ = writeln!(s, "  {:<12} {:.2} ± {:.2} (n = {})", c.as_str(), m.mean, m.half_width, m.n);
            }
            let _ = writeln!(s, "  two-tailed t-tests (alpha = {})", self.alpha);
            write_tests(&mut s, tests, self.alpha, "mean");
        }
        s
    }

    /// Long-form CSV: `section,condition_a,condition_b,quantity,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("section,condition_a,condition_b,quantity,value\n");
        for c in &self.conditions {
            let n = c.condition.as_str();
            for (q, v) in [
                ("n_agree", c.agreement.n_agree as f64),
                ("n_disagree", c.agreement.n_disagree as f64),
                ("percent_agreement", 100.0 * c.percent_agreement),
                ("wilson_low", 100.0 * c.wilson.low),
                ("wilson_high", 100.0 * c.wilson.high),
            ] {
                let _ = writeln!(s, "agreement,{n},,{q},{v}");
            }
            for (section, m) in [("tts", c.tts), ("eor", c.eor)] {
                if let Some(m) = m {
                    let _ = writeln!(s, "{section},{n},,mean,{}", m.mean);
                    let _ = writeln!(s, "{section},{n},,ci_half_width,{}", m.half_width);
                    let _ = writeln!(s, "{section},{n},,n,{}", m.n);
                }
            }
        }
        for m in &self.missing {
            let _ = writeln!(s, "agreement,{},,missing,", m.as_str());
        }
        for (section, tests) in [
            ("agreement_ttest", &self.agreement_tests),
            ("tts_ttest", &self.tts_tests),
            ("eor_ttest", &self.eor_tests),
        ] {
            for t in tests {
                let (a, b) = (t.a.as_str(), t.b.as_str());
                match &t.t_test {
                    Ok(r) => {
                        let _ = writeln!(s, "{section},{a},{b},t,{}", r.t_statistic);
                        let _ = writeln!(s, "{section},{a},{b},df,{}", r.degrees_of_freedom);
                        let _ = writeln!(s, "{section},{a},{b},p_value,{}", r.p_value);
                    }
                    Err(_) => {
                        let _ = writeln!(s, "{section},{a},{b},p_value,");
                    }
                }
                if let Some(p) = t.f_test_p {
                    let _ = writeln!(s, "{section},{a},{b},f_test_p_value,{p}");
                }
            }
        }
        s
    }
}

fn write_tests(s: &mut String, tests: &[PairTest], alpha: f64, what: &str) {
    for t in tests {
        let names = format!("{} vs {}", t.a.as_str(), t.b.as_str());
        match &t.t_test {
            Ok(r) => {
                let verdict = if r.p_value < alpha { "rejected" } else { "not rejected" };
                let f = t.f_test_p.map_or_else(|| "n/a".to_owned(), |p| format!("{p:.3}"));
                let _ = writeln!(
                    s,
                    "  {names:<24} {what}: t = {:.4}, df = {}, p = {:.4} ({verdict}); F-test p = {f}",
                    r.t_statistic, r.degrees_of_freedom, r.p_value
                );
            }
            Err(e) => {
                let _ = writeln!(s, "  {names:<24} skipped: {e}");
            }
        }
    }
}
