use super::ast::render_linear;
use crate::{Error, Result};

const FIXED: &[(&str, &str)] = &[
    ("eq3", "K(n) = 3*T(n+1) - 2*T(n) - T(n-1)"),
    ("eq4", "K(n) = T(n) + 2*T(n-1) + 3*T(n-2)"),
    ("eq5", "K(n) = 4*T(n+1) - T(n) - T(n+2)"),
    ("t_recurrence", "T(n) = T(n-1) + T(n-2) + T(n-3)"),
    ("k_recurrence", "K(n) = K(n-1) + K(n-2) + K(n-3)"),
    ("t_backward", "T(-n) = T(-n+3) - T(-n+2) - T(-n+1)"),
    ("rel_a", "K(-n) = 3*T(-n+1) - 2*T(-n) - T(-n-1)"),
    ("rel_b", "K(-n) = T(-n) + 2*T(-n-1) + 3*T(-n-2)"),
    ("rel_c", "K(-n) = -T(-n+2) + 4*T(-n+1) - T(-n)"),
    ("rel_d_scaled", "T(-n) = frac(1,22)*(5*K(-n+2) - 3*K(-n+1) - 4*K(-n))"),
    ("rel_d_cleared", "22*T(-n) = 5*K(-n+2) - 3*K(-n+1) - 4*K(-n)"),
    ("k0_scaled", "T(-n) = frac(1,22)*(K(-n) + 5*K(-n-1) + 2*K(-n+1))"),
    ("k0_cleared", "22*T(-n) = K(-n) + 5*K(-n-1) + 2*K(-n+1)"),
    (
        "t_prefix_sum_step",
        "frac(-1,2)*(T(-n) + T(-n-2) + 2*T(-n-1) - 1) - frac(-1,2)*(T(-n+1) + T(-n-1) + 2*T(-n) - 1) = T(-n)",
    ),
    (
        "k_prefix_sum_step",
        "frac(-1,2)*(K(-n) + K(-n-2) + 2*K(-n-1) - 6) - frac(-1,2)*(K(-n+1) + K(-n-1) + 2*K(-n) - 6) = K(-n)",
    ),
];

/// Fixed `m` values at which the two-index product identities are instantiated.
pub const PRODUCT_M: [i64; 4] = [0, 1, 2, 3];

fn s(name: &str, b: i64) -> String {
    format!("{name}({})", render_linear(0, b))
}

fn sn(name: &str, b: i64) -> String {
    format!("{name}({})", render_linear(-1, b))
}

fn product_entries(m: i64) -> Vec<(String, String)> {
    let kk = format!(
        "{}*{} + {}*({} + {}) + {}*{}",
        s("K", -m),
        sn("K", 1),
        sn("K", 0),
        s("K", -m - 1),
        s("K", -m - 2),
        s("K", -m - 1),
        sn("K", -1),
    );
    let t = |c: i64| sn("T", c - m);
    vec![
        (
            format!("prod_a_m{m}"),
            format!(
                "{} = {}*{} + {}*({} + {}) + {}*{}",
                sn("T", -m),
                s("T", -m),
                sn("T", 1),
                sn("T", 0),
                s("T", -m - 1),
                s("T", -m - 2),
                s("T", -m - 1),
                sn("T", -1),
            ),
        ),
        (
            format!("prod_b_m{m}"),
            format!(
                "{} = {}*{} + {}*({} + {}) + {}*{}",
                sn("K", -m),
                s("T", -m),
                sn("K", 1),
                sn("K", 0),
                s("T", -m - 1),
                s("T", -m - 2),
                sn("K", -1),
                s("T", -m - 1),
            ),
        ),
        (
            format!("prod_c_m{m}"),
            format!(
                "{kk} = 9*{} - 12*{} - 2*{} + 4*{} + {}",
                t(2),
                t(1),
                t(0),
                t(-1),
                t(-2)
            ),
        ),
        (
            format!("prod_d_m{m}"),
            format!(
                "{kk} = {} + 4*{} + 10*{} + 12*{} + 9*{}",
                t(0),
                t(-1),
                t(-2),
                t(-3),
                t(-4)
            ),
        ),
        (
            format!("prod_e_m{m}"),
            format!(
                "{kk} = {} - 8*{} + 18*{} - 8*{} + {}",
                t(0),
                t(1),
                t(2),
                t(3),
                t(4)
            ),
        ),
    ]
}

/// Named scalar identities, each in the form `parse_identity` accepts.
pub fn builtin_corpus() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = FIXED
        .iter()
        .map(|(n, t)| (n.to_string(), t.to_string()))
        .collect();
    for m in PRODUCT_M {
        out.extend(product_entries(m));
    }
    out
}

/// Reads `name: identity` lines. Blank lines and `#` comments are skipped;
/// a line without a name gets `line<k>`.
pub fn parse_corpus_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let entry = match line.split_once(':') {
            Some((name, body)) => {
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(Error::InvalidArgument(format!(
                        "line {}: bad entry name `{name}`",
                        k + 1
                    )));
                }
                (name.to_string(), body.trim().to_string())
            }
            None => (format!("line{}", k + 1), line.to_string()),
        };
        out.push(entry);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn required_entries_present() {
        let corpus = builtin_corpus();
        assert!(corpus.len() >= 20);
        let get = |n: &str| corpus.iter().find(|(k, _)| k == n).map(|(_, v)| v.as_str());
        assert_eq!(get("eq3"), Some("K(n) = 3*T(n+1) - 2*T(n) - T(n-1)"));
        assert_eq!(get("eq5"), Some("K(n) = 4*T(n+1) - T(n) - T(n+2)"));
        assert_eq!(
            get("prod_a_m2"),
            Some("T(-n-2) = T(-2)*T(-n+1) + T(-n)*(T(-3) + T(-4)) + T(-3)*T(-n-1)")
        );
        let mut names: Vec<_> = corpus.iter().map(|(k, _)| k).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), corpus.len());
    }

    #[test]
    fn m0_instances_use_plain_indices() {
        let corpus = builtin_corpus();
        let (_, text) = corpus.iter().find(|(k, _)| k == "prod_c_m0").unwrap();
        assert_eq!(
            text,
            "K(0)*K(-n+1) + K(-n)*(K(-1) + K(-2)) + K(-1)*K(-n-1) \
             = 9*T(-n+2) - 12*T(-n+1) - 2*T(-n) + 4*T(-n-1) + T(-n-2)"
        );
    }

    #[test]
    fn file_format() {
        let text = "# header\n\neq3: K(n) = 3*T(n+1) - 2*T(n) - T(n-1)  # trailing\nT(n) = T(n)\n";
        let entries = parse_corpus_file(text).unwrap();
        assert_eq!(
            entries,
            vec![
                (
                    "eq3".to_string(),
                    "K(n) = 3*T(n+1) - 2*T(n) - T(n-1)".to_string()
                ),
                ("line4".to_string(), "T(n) = T(n)".to_string()),
            ]
        );
        assert!(parse_corpus_file("bad name: T(n) = T(n)").is_err());
    }
}
