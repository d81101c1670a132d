//! Prints the reference table rows with their expected values.

use sl2z::cli::tables::table_rows;

fn main() -> sl2z::Result<()> {
    for row in table_rows(&[1, 2, 3, 4], 1e-6)? {
        println!(
            "{} {:>5} {:<22} {:>+.15e} {}",
            row.table,
            row.space,
            row.quantity,
            row.value,
            if row.pass { "ok" } else { "MISMATCH" }
        );
    }
    Ok(())
}
