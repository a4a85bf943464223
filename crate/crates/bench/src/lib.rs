//! Input generators shared by the benchmarks.

/// Deterministic nested matchertext of roughly `len` bytes.
pub fn nested_text(len: usize) -> String {
    let mut out = String::with_capacity(len + 16);
    let pairs = [('(', ')'), ('[', ']'), ('{', '}')];
    let mut stack = Vec::new();
    let mut state: u32 = 0x9e37_79b9;
    while out.len() < len {
        state ^= state << 13;
        state ^= state >> 17;
        state ^= state << 5;
        match state % 8 {
            0 | 1 if stack.len() < 12 => {
                let (o, c) = pairs[(state as usize >> 3) % 3];
                out.push(o);
                stack.push(c);
            }
            2 => {
                if let Some(c) = stack.pop() {
                    out.push(c);
                }
            }
            _ => out.push_str("ab \"x\" "),
        }
    }
    while let Some(c) = stack.pop() {
        out.push(c);
    }
    out
}

/// C-like source with comments and string literals.
pub fn c_source(lines: usize) -> String {
    (0..lines)
        .map(|i| match i % 4 {
            0 => format!("int f{i}(int a) {{ return g(a, \"{{\"); }}\n"),
            1 => format!("/* block {i} ( */\n"),
            2 => format!("x[{i}] = y; // note ]\n"),
            _ => format!("char c{i} = ')';\n"),
        })
        .collect()
}
