//! Exact checks of every stored vector set.

use super::ops::{FixtureCheck, Op};
use super::{Count, Run, Verdict, VerdictStatus};
use crate::catalog;
use crate::error::Result;

pub(super) fn verify_paper_reps(run: &mut Run) -> Result<Verdict> {
    let mut findings = vec![];
    let mut failed = vec![];
    let mut passed = 0;
    for f in catalog::all_fixtures() {
        if f.parties.is_some() {
            continue;
        }
        let c: FixtureCheck = run.exec_as(&format!("fixture {}", f.name), Op::VerifyFixture { fixture: f.name.clone() })?;
        let mut line = format!(
            "{} ({:?}, d={}): {}, max edge residual {:.1e}, min non-edge {:.3}",
            c.fixture,
            c.mode,
            c.d,
            if c.pass { "pass" } else { "FAIL" },
            c.max_edge_residual,
            c.min_non_edge
        );
        if let Some(r) = c.field_root_residual {
            line.push_str(&format!(", root residual {r:.1e}"));
        }
        if c.pass {
            passed += 1;
            findings.push(line);
        } else {
            failed.push(line);
        }
    }
    let subset = vec![2, 3, 8, 9, 10];
    let rank: serde_json::Value = run.exec(
        "rank of the forced classes of M5057",
        Op::SubsetRank { fixture: "M5057_FOR3".into(), subset: subset.clone() },
    )?;
    let rank = rank["rank"].as_u64().unwrap_or(0);
    let line = format!("M5057_FOR3: rank of {{v3,v4,v9,v10,v11}} = {rank}");
    if rank == 2 {
        findings.push(line);
    } else {
        failed.push(line);
    }
    let pb: serde_json::Value = run.exec("19-element product basis", Op::ProductBasis { fixture: "upb_19".into() })?;
    let ok = pb["mutually_orthogonal"].as_bool() == Some(true) && pb["log_union_complete"].as_bool() == Some(true);
    let line = format!("upb_19: mutually orthogonal and LOGs cover K19: {ok}; LOG edges {}", pb["log_edges"]);
    if ok {
        findings.push(line);
    } else {
        failed.push(line);
    }
    let counts = vec![
        Count { label: "fixtures passing".into(), value: passed.to_string() },
        Count { label: "failed checks".into(), value: failed.len().to_string() },
    ];
    let (status, conclusion) = if failed.is_empty() {
        (VerdictStatus::Verified, "every stored representation verifies exactly".to_string())
    } else {
        (VerdictStatus::Failed, format!("{} checks failed", failed.len()))
    };
    findings.extend(failed);
    Ok(Verdict { status, conclusion, counts, findings, undecided: vec![] })
}
