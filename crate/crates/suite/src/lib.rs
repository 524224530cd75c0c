//! Holds the `acceptance` test target, which prints one PASS/FAIL line per
//! criterion and exits non-zero if any is red. Run it with
//! `cargo test -p mediatorless-suite --test acceptance`.
