//! CSV output for batches and expected-time tables.

use std::io::Write;

use dynepi_core::prisoners::{CounterChain, ExpectedTimeTable};

use crate::batch::RunRecord;

/// One row per run: `run,seed,escape_day,capped`. Capped runs leave
/// `escape_day` empty.
pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run", "seed", "escape_day", "capped"])?;
    for r in records {
        w.write_record([
            r.run.to_string(),
            r.seed.to_string(),
            r.escape_day.map(|d| d.to_string()).unwrap_or_default(),
            r.capped().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `tokens,light,expected_days`, tokens as a space separated multiset.
pub fn write_table<W: Write>(out: W, table: &ExpectedTimeTable) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["tokens", "light", "expected_days"])?;
    for (config, value) in &table.entries {
        let tokens: Vec<String> = config.held.iter().map(|t| t.to_string()).collect();
        w.write_record([
            tokens.join(" "),
            config.light.to_string(),
            value.days.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `remaining_followers,light,expected_days` for the counter chain.
pub fn write_counter_chain<W: Write>(out: W, chain: &CounterChain) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["remaining_followers", "light", "expected_days"])?;
    for (state, days) in chain.rows() {
        w.write_record([
            state.remaining.to_string(),
            state.light.to_string(),
            days.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
