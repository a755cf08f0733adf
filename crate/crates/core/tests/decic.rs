use std::collections::BTreeMap;

use nodal_atlas::catalog::{barth_decic_params, decic_family};
use nodal_atlas::icosahedral::icosahedral_group;
use nodal_atlas::singularities::{analyze, SearchSettings};

#[test]
fn catalog_decic_has_345_nodes_on_mirror_planes() {
    let f = decic_family(&barth_decic_params());
    let a = analyze(&f, &SearchSettings::default(), Some(icosahedral_group())).unwrap();
    assert_eq!(a.set.count(), 345);
    assert!(a.set.is_complete() && a.all_a1());
    let orbits = a.orbits.clone().unwrap().unwrap();
    let mut sizes = BTreeMap::new();
    for o in &orbits {
        *sizes.entry(o.size).or_insert(0) += 1;
        assert!(o.members.iter().all(|&i| a.set.points[i].on_mirror_plane.is_some()));
    }
    assert_eq!(sizes, BTreeMap::from([(15, 1), (30, 3), (60, 4)]));
}
