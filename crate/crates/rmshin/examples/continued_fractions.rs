//! Hirzebruch-Jung expansions and the cycle data of a reduced pair.

use rmshin::modgroup::{cycle_data, hj_expand, reduce_pair, CharVec};
use rmshin::qfield::parse_quad;

fn main() -> rmshin::Result<()> {
    for text in ["sqrt(3)", "(1+sqrt(5))/2", "sqrt(7)", "(3+sqrt(13))/2"] {
        let beta = parse_quad(text)?;
        let hj = hj_expand(&beta)?;
        let digits = |v: &[rug::Integer]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        println!(
            "{text:>16}  preperiod [{}]  period [{}]",
            digits(&hj.preperiod),
            digits(&hj.period)
        );
    }

    let r = CharVec::parse("0,4/5")?;
    let beta = parse_quad("sqrt(3)")?;
    let (rr, br, m) = reduce_pair(&r, &beta)?;
    let cd = cycle_data(&rr, &br)?;
    println!();
    println!("({r}, {beta}) reduces to ({rr}, {br}) via {m}");
    println!("k = {}, ell = {}, P = {}, A = {}", cd.k, cd.ell, cd.p, cd.a);
    for (n, (rn, wn)) in cd.r_n.iter().zip(&cd.w_n).enumerate() {
        println!("  n = {n}: r_n = {rn}, w_n = {wn}");
    }
    Ok(())
}
