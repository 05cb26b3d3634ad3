//! Running the seeded property suites from code. Reports render as text or
//! as one JSON object per line; failing trials name the command that
//! replays them.

use holonomy::props::{run_suite, Suite, SuiteConfig};

fn main() {
    let cfg = SuiteConfig { trials: Some(50), ..SuiteConfig::with_seed(42) };
    for suite in [Suite::Lemma1, Suite::Prop1, Suite::Roundtrip] {
        // the exhaustive enumeration only runs from trial 0
        let cfg = SuiteConfig { first_trial: if suite == Suite::Roundtrip { 1 } else { 0 }, ..cfg.clone() };
        print!("{}", run_suite(suite, &cfg).to_text());
    }

    let r = run_suite(Suite::Thm1, &SuiteConfig { trials: Some(5), ..SuiteConfig::with_seed(42) });
    println!("\nstructured:");
    print!("{}", r.to_structured());
}
