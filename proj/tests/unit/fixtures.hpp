#pragma once

namespace testdata {

inline constexpr const char* kSampleScenario1 = R"(#[cfg(feature = "a")]
fn foo() {
    #[cfg(any(feature = "b", feature = "c"))]
    fn bar() {
        let x = 1;
    }

    fn qux() {
        bar();
    }
}
)";

inline constexpr const char* kSampleScenario2 = R"(#[cfg(all(feature = "c", feature = "d"))]
fn baz() {
    let y = 2;
}
)";

inline constexpr const char* kMixedSource = R"(use std::io;
extern crate alloc;

const LIMIT: usize = 4;
static COUNT: u32 = 0;

pub struct Point<T> {
    x: T,
    #[cfg(feature = "three_d")]
    z: T,
}

enum Mode {
    Slow,
    #[cfg(feature = "turbo")]
    Fast,
}

pub trait Shape {
    fn area(&self) -> f64;
}

impl<T> Point<T> {
    pub fn new(x: T) -> Self {
        let p = Point { x };
        helper(1, 2);
        p
    }
}

mod inner {
    fn helper(a: u32, b: u32) -> u32 {
        if a > b { a } else { b }
    }
}

fn run(s: &dyn Shape) -> f64 {
    let total = s.area() * 2.0;
    match total as u32 {
        0 => helper(0, 0) as f64,
        n if n > 3 => { let k = n; k as f64 }
        _ => total,
    }
}
)";

inline constexpr const char* kAwkwardSource = R"(macro_rules! twice {
    ($e:expr) => { $e; $e };
}

type Alias<'a> = &'a str;

fn lifetimes<'a, T: Clone + 'a>(x: &'a T) -> impl Fn() -> T + 'a where T: Default {
    let c = 'c';
    let s = r#"raw " string"#;
    let b = b"bytes";
    /* nested /* block */ comment */
    let closure = |y: u32| -> u32 { y + 1 };
    twice!(closure(1));
    async move { 1 };
    loop { break; }
    while let Some(x) = None::<u8> { let _ = x; }
    for (i, j) in [(1, 2)].iter() {}
    unsafe { core::ptr::null::<u8>(); }
    move || x.clone()
}

union Bits { a: u32, b: f32 }

extern "C" {
    fn abs(x: i32) -> i32;
}

fn after() {}
)";

}  // namespace testdata
