//! Sign map of the value gradient over the noise square, drawn in text.
//! Each cell shows the signs of (dV/dq1, dV/dq0); rows run from low to
//! high q1.

use screenlab::distribution::TypeDistribution;
use screenlab::model::ModelParams;
use screenlab::valuation::sign_map;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 20;
    let cells = sign_map(ModelParams::new(0.24, 0.24)?, &TypeDistribution::Uniform, n)?;
    let glyph = |s: i8| match s {
        1 => '+',
        -1 => '-',
        _ => '0',
    };
    println!("q1 \\ q0 ->");
    for row in cells.chunks(n) {
        let line: String = row
            .iter()
            .map(|c| format!("{}{} ", glyph(c.sign1), glyph(c.sign0)))
            .collect();
        println!("{:.3}  {line}", row[0].q1);
    }
    let both_neg = cells.iter().filter(|c| c.sign1 < 0 && c.sign0 < 0).count();
    let both_pos = cells.iter().filter(|c| c.sign1 > 0 && c.sign0 > 0).count();
    println!(
        "\nboth negative: {both_neg}, both positive: {both_pos}, of {}",
        cells.len()
    );
    Ok(())
}
