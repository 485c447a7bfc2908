//! Runs the acceptance criteria given on the command line, or all of them.

use pinchlab::cli::selfcheck::run_criterion;

fn main() {
    let ids: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { (1..=12).collect() } else { ids };
    for id in ids {
        println!("{}", run_criterion(id).line());
    }
}
