//! Named groups and groupoids: `trivial`, `Z<n>`, `S<n>` and the natural
//! action groupoid `S<n>_on_<n>`.

use crate::groupoid::{action_groupoid, group_as_groupoid, FiniteGroupoid, GroupTable};

const MAX_CYCLIC: usize = 64;
const MAX_SYMMETRIC: usize = 5;

pub fn group(name: &str) -> Option<GroupTable> {
    if name == "trivial" {
        return Some(GroupTable::trivial());
    }
    let (kind, n) = name.split_at(1);
    let n: usize = n.parse().ok()?;
    match kind {
        "Z" if (1..=MAX_CYCLIC).contains(&n) => Some(GroupTable::cyclic(n)),
        "S" if (1..=MAX_SYMMETRIC).contains(&n) => Some(GroupTable::symmetric(n)),
        _ => None,
    }
}

/// `S_n` acting on `{1, …, n}` by `x·p = p(x)`.
pub fn natural_action(n: usize) -> FiniteGroupoid {
    let sym = GroupTable::symmetric(n);
    let points: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let action: Vec<Vec<usize>> = sym
        .names()
        .iter()
        .map(|word| word.bytes().map(|b| (b - b'1') as usize).collect())
        .collect();
    action_groupoid(&group_as_groupoid(&sym), &points, &action).expect("natural action is a right action")
}

pub fn groupoid(name: &str) -> Option<FiniteGroupoid> {
    if let Some(g) = group(name) {
        return Some(group_as_groupoid(&g));
    }
    let rest = name.strip_prefix('S')?;
    let (n, m) = rest.split_once("_on_")?;
    let n: usize = n.parse().ok()?;
    (m.parse() == Ok(n) && (1..=MAX_SYMMETRIC).contains(&n)).then(|| natural_action(n))
}
