#![no_main]
use inertia_cli::commands::{run, Command, Options};
use inertia_cli::input::parse_input;
use libfuzzer_sys::fuzz_target;

const MAX_MORPHISMS: usize = 12;

fuzz_target!(|data: &str| {
    let Ok(input) = parse_input(data) else { return };
    let opts = Options {
        cap: Some(2),
        ..Default::default()
    };
    let _ = run(&Command::Validate, &input, &opts);
    let _ = run(&Command::Inertia { entity: None }, &input, &opts);
    for (name, entity) in &input.entities {
        match entity.groupoid() {
            Some(g) if g.num_morphisms() <= MAX_MORPHISMS => {
                let report = run(&Command::Verify { entity: name.clone() }, &input, &opts).expect("verify runs");
                assert!(report.ok, "{}", report.text);
            }
            Some(_) => {}
            None => {
                let _ = run(
                    &Command::Cr {
                        sectors: name.clone(),
                        against: None,
                    },
                    &input,
                    &opts,
                );
            }
        }
    }
});
