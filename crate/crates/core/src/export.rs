//! CSV export of rankings and sensitivity sweeps.
//!
//! Numbers are written with a dot decimal separator and four decimals.

use crate::model::RankingResult;
use crate::sensitivity::SensitivityReport;

pub fn fixed4(value: f64) -> String {
    format!("{value:.4}")
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv output is UTF-8")
}

/// `alternative,rank,score`
pub fn ranking_csv(ranking: &RankingResult) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["alternative", "rank", "score"])
        .expect("in-memory write");
    for e in &ranking.entries {
        w.write_record([e.alternative.clone(), e.rank.to_string(), fixed4(e.score)])
            .expect("in-memory write");
    }
    finish(w)
}

/// `criterion_weight,alternative,rank,score`, one row per grid point and
/// alternative.
pub fn sensitivity_csv(report: &SensitivityReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["criterion_weight", "alternative", "rank", "score"])
        .expect("in-memory write");
    for point in &report.points {
        for e in &point.ranking.entries {
            w.write_record([
                fixed4(point.weight),
                e.alternative.clone(),
                e.rank.to_string(),
                fixed4(e.score),
            ])
            .expect("in-memory write");
        }
    }
    finish(w)
}
