//! varpi_r along the vertical line above beta, normalized by mu^-t.

use rmshin::cli::{asym_csv, asym_rows};
use rmshin::modgroup::CharVec;
use rmshin::qfield::parse_quad;

fn main() -> rmshin::Result<()> {
    let r = CharVec::parse("0,4/5")?;
    let beta = parse_quad("sqrt(3)")?;
    let (rows, warnings) = asym_rows(&r, &beta, 4.0, 9, 128)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    println!("{}", asym_csv(&rows));
    Ok(())
}
