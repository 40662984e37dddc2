#![allow(dead_code, unused_imports)]

pub use cosym::testdata::{random_field, random_form, random_map, random_poly};

pub fn coords(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}
