mod common;

use inertia_core::catalog;
use inertia_core::groupoid::{connected_components, group_as_groupoid, inertia, isotropy_group, GroupTable};
use inertia_core::nerve::{cyclic_nerve, free_cyclic, inertia_simplicial, iso_f_map, iso_h_map, nerve};

#[test]
fn identities_hold_for_test_groupoids() {
    for (name, g, _) in common::six() {
        assert!(nerve(&g, 4).verify_identities().is_empty(), "{name} nerve");
        assert!(
            cyclic_nerve(&g, 4).verify_identities().is_empty(),
            "{name} cyclic nerve"
        );
        assert!(
            inertia_simplicial(&g, 4).verify_identities().is_empty(),
            "{name} inertia"
        );
        assert!(
            free_cyclic(&nerve(&g, 3)).verify_identities().is_empty(),
            "{name} free cyclic"
        );
    }
}

#[test]
fn f_and_h_are_inverse_cyclic_isomorphisms() {
    for (name, g, _) in common::six() {
        let l = inertia_simplicial(&g, 3);
        let y = cyclic_nerve(&g, 3);
        let f = iso_f_map(&g, &l, &y).unwrap();
        let h = iso_h_map(&g, &y, &l).unwrap();
        assert!(f.then(&h).is_identity() && h.then(&f).is_identity(), "{name}");
        assert!(f.verify_cyclic(&l, &y).is_empty(), "{name} f");
        assert!(h.verify_cyclic(&y, &l).is_empty(), "{name} h");
    }
}

#[test]
fn inertia_components_are_conjugacy_classes() {
    let mut groups: Vec<GroupTable> = (1..=12).map(GroupTable::cyclic).collect();
    groups.extend([GroupTable::symmetric(3), GroupTable::symmetric(4)]);
    for t in groups {
        let (lg, _) = inertia(&group_as_groupoid(&t)).unwrap();
        assert_eq!(connected_components(&lg).len(), common::class_representatives(&t).len());
    }
}

#[test]
fn action_inertia_components_are_orbit_stabilizer_classes() {
    for n in 2..=4 {
        let g = catalog::natural_action(n);
        let (lg, _) = inertia(&g).unwrap();
        let expected: usize = connected_components(&g)
            .iter()
            .map(|orbit| common::class_representatives(&isotropy_group(&g, orbit[0]).unwrap()).len())
            .sum();
        assert_eq!(connected_components(&lg).len(), expected, "S{n} on {n}");
    }
}
