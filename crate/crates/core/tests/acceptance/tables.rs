// Published code lists, one code per line in table order.

/// Four-message cycle: 27 listed codes.
pub const FOUR_CYCLE_TABLE: &str = "\
x1+x2,x2+x3,x3+x4
x1+x2,x2+x3,x2+x4
x1+x2,x2+x3,x1+x2+x3+x4
x1+x2,x2+x3,x1+x4
x1+x2,x3+x4,x1+x3
x1+x2,x3+x4,x2+x4
x1+x2,x3+x4,x1+x4
x1+x2,x1+x3,x2+x4
x1+x2,x1+x3,x1+x2+x3+x4
x1+x2,x1+x3,x1+x4
x1+x2,x2+x4,x1+x2+x3+x4
x1+x2,x1+x2+x3+x4,x1+x4
x2+x3,x3+x4,x1+x3
x2+x3,x3+x4,x1+x2+x3+x4
x2+x3,x3+x4,x1+x4
x2+x3,x1+x3,x2+x4
x2+x3,x1+x3,x1+x4
x2+x3,x2+x4,x1+x2+x3+x4
x2+x3,x2+x4,x1+x4
x3+x4,x1+x3,x2+x4
x3+x4,x1+x3,x1+x2+x3+x4
x1+x3,x2+x4,x1+x4
x1+x3,x1+x2+x3+x4,x1+x4
x2+x4,x1+x2+x3+x4,x1+x4
x3+x4,x2+x4,x1+x2+x3+x4
x3+x4,x2+x4,x1+x4
x3+x4,x1+x2+x3+x4,x1+x4
";

/// Four-message cycle with an extra side-information bit: codes and their
/// listed worst-case usage.
pub const FOUR_CYCLE_EXTRA_TABLE: &str = "\
x1+x2,x2+x3,x3+x4 3
x1+x2,x2+x3,x2+x4 2
x1+x2,x2+x3,x1+x2+x3+x4 2
x1+x2,x2+x3,x1+x4 3
x1+x2,x3+x4,x1+x3 2
x1+x2,x3+x4,x2+x4 2
x1+x2,x3+x4,x1+x4 3
x1+x2,x1+x3,x2+x4 3
x1+x2,x1+x3,x1+x2+x3+x4 3
x1+x2,x1+x3,x1+x4 2
x1+x2,x2+x4,x1+x2+x3+x4 3
x1+x2,x1+x2+x3+x4,x1+x4 2
x2+x3,x3+x4,x1+x3 2
x2+x3,x3+x4,x1+x2+x3+x4 2
x2+x3,x3+x4,x1+x4 3
x2+x3,x1+x3,x2+x4 3
x2+x3,x1+x3,x1+x2+x3+x4 3
x2+x3,x1+x3,x1+x4 2
x2+x3,x2+x4,x1+x2+x3+x4 3
x2+x3,x2+x4,x1+x4 2
x3+x4,x1+x3,x2+x4 3
x3+x4,x1+x3,x1+x2+x3+x4 3
x1+x3,x2+x4,x1+x4 3
x1+x3,x1+x2+x3+x4,x1+x4 3
x2+x4,x1+x2+x3+x4,x1+x4 3
x3+x4,x2+x4,x1+x2+x3+x4 3
x3+x4,x2+x4,x1+x4 2
x3+x4,x1+x2+x3+x4,x1+x4 2
x3+x2,x2+x1,x1+x4+x3 3
x3+x2,x2+x1,x4 2
x3+x2,x2+x1,x1+x4+x2 2
x1+x2,x2+x3,x2+x4+x3 2
x1+x2,x4,x1+x4+x3 3
x1+x2,x1+x3,x1+x4+x3 2
x1+x2,x2+x4+x1,x1+x4+x3 3
x1+x2,x1+x3,x4 2
x1+x2,x4,x2+x4+x3 3
x1+x2,x1+x3,x1+x4+x2 2
x1+x2,x1+x3,x2+x4+x3 3
x1+x2,x2+x3+x4,x1+x4+x2 2
x3+x2,x4,x1+x4+x3 3
x3+x2,x1+x3,x1+x4+x3 2
x3+x2,x2+x3+x4,x1+x4+x3 3
x3+x2,x1+x3,x4 2
x3+x2,x4,x1+x4+x2 3
x3+x2,x1+x3,x1+x4+x2 3
x3+x2,x1+x3,x2+x4+x3 2
x3+x2,x2+x4+x1,x2+x4+x3 3
x1+x2+x4,x4,x1+x4+x3 2
x3+x2+x4,x4,x1+x4+x3 2
x3+x1,x2+x4+x1,x1+x4+x3 3
x3+x2+x4,x2+x1+x4,x1+x4+x3 3
x3+x1,x4,x1+x4+x2 3
x3+x1,x4,x2+x4+x3 3
x4,x1+x2+x4,x1+x4+x3 2
x3+x1,x2+x3+x4,x1+x4+x3 3
";

/// Five-message cycle-plus-swap problem.
pub const CYCLE_SWAP_TABLE: &str = "\
x1+x2,x2+x3,x4+x5
x1+x3,x1+x2,x4+x5
x1+x3,x2+x3,x4+x5
x1+x3,x2+x3,x1+x3+x4+x5
x1+x3,x4+x5,x2+x3+x4+x5
x1+x3,x2+x3,x2+x3+x4+x5
x1+x2,x1+x3,x1+x2+x4+x5
x1+x2,x1+x3,x1+x2+x4+x5
x1+x2,x4+x5,x2+x3+x4+x5
x1+x2,x2+x3,x1+x2+x4+x5
x1+x2,x2+x3,x2+x3+x4+x5
x4+x5,x1+x3,x1+x2+x4+x5
x4+x5,x2+x3,x1+x2+x4+x5
x4+x5,x1+x2,x1+x3+x4+x5
x4+x5,x2+x3,x1+x3+x4+x5
x1+x3,x1+x2+x4+x5,x1+x3+x4+x5
x2+x3,x2+x3+x4+x5,x1+x3+x4+x5
x1+x2,x2+x3+x4+x5,x1+x2+x4+x5
x4+x5,x1+x3+x4+x5,x2+x3+x4+x5
x4+x5,x1+x3+x4+x5,x1+x2+x4+x5
x4+x5,x1+x2+x4+x5,x2+x3+x4+x5
x1+x2,x1+x2+x4+x5,x2+x3+x4+x5
x1+x2,x1+x3+x4+x5,x1+x2+x4+x5
x1+x3,x2+x3+x4+x5,x1+x3+x4+x5
x1+x2,x1+x3,x2+x3+x4+x5
x2+x3,x1+x3,x1+x2+x4+x5
x1+x2,x2+x3,x1+x3+x4+x5
x1+x2+x4+x5,x1+x3+x4+x5,x2+x3+x4+x5
";
