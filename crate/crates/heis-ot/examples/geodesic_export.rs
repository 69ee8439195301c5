//! Export minimal curves as CSV for plotting: a straight horizontal segment,
//! a twisted arc, and a center-line pair under the canonical selection.
//!
//! ```bash
//! cargo run --example geodesic_export > curves.csv
//! ```

use heis_ot::io::write_curve_csv;
use heis_ot::Point;
use std::io::stdout;

fn main() {
    let cases = [
        (
            "straight horizontal",
            Point::origin(1),
            Point::h1(1.0, 0.0, 0.0),
            None,
        ),
        (
            "twisted arc",
            Point::h1(0.2, -0.1, 0.0),
            Point::h1(-0.4, 0.6, 0.7),
            None,
        ),
        (
            "center line (canonical selection)",
            Point::origin(1),
            Point::h1(0.0, 0.0, 1.0),
            Some("center-line pair: canonical minimal-curve selection used"),
        ),
    ];
    let mut out = stdout();
    for (label, x, y, note) in cases {
        println!("# --- {label} ---");
        write_curve_csv(&mut out, &x, &y, 16, note).unwrap();
    }
}
