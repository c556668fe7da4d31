//! Holds the end-to-end acceptance suite in `tests/acceptance.rs`. Run it
//! with `cargo test -p koornwinder-validation -- --nocapture` to see one
//! PASS/FAIL line per criterion.
