mod common;

use lrc_core::geometry::positivity;
use lrc_core::hive::exact_count;
use lrc_core::PartitionTriple;

#[test]
fn tableau_rule_sanity() {
    assert_eq!(common::lr_tableaux(&[2, 1, 0], &[2, 1, 0], &[3, 2, 1]), 2);
    assert_eq!(common::lr_tableaux(&[1, 0], &[1, 0], &[1, 1]), 1);
    assert_eq!(common::lr_tableaux(&[2, 1, 0], &[2, 1, 0], &[6, 0, 0]), 0);
    assert_eq!(common::lr_tableaux(&[1, 0], &[1, 0], &[2, 0]), 1);
}

#[test]
fn hive_count_matches_tableau_rule() {
    for n in 2..=4usize {
        let max = if n == 4 { 3 } else { 4 };
        let parts = common::partitions(n, max);
        let mut checked = 0;
        for lam in &parts {
            for mu in &parts {
                for nu in common::partitions(n, 2 * max) {
                    if lam.iter().sum::<i64>() + mu.iter().sum::<i64>() != nu.iter().sum::<i64>() {
                        continue;
                    }
                    let t = PartitionTriple::from_parts(lam, mu, &nu).unwrap();
                    let expected = common::lr_tableaux(lam, mu, &nu);
                    assert_eq!(exact_count(&t, 10_000_000).unwrap(), expected, "{t}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 100);
    }
}

#[test]
fn larger_triples_match_tableau_rule() {
    let cases: &[(&[i64], &[i64], &[i64])] = &[
        (&[4, 2, 1, 0, 0], &[3, 2, 1, 1, 0], &[6, 4, 2, 2, 0]),
        (&[5, 3, 2, 1, 0], &[4, 3, 1, 0, 0], &[7, 5, 4, 3, 0]),
        (&[3, 3, 2, 1, 1], &[3, 2, 2, 1, 0], &[5, 4, 4, 3, 2]),
    ];
    for &(l, m, v) in cases {
        let t = PartitionTriple::from_parts(l, m, v).unwrap();
        assert_eq!(exact_count(&t, 100_000_000).unwrap(), common::lr_tableaux(l, m, v), "{t}");
    }
}

#[test]
fn positivity_matches_tableau_rule_n3() {
    let parts = common::partitions(3, 3);
    for lam in &parts {
        for mu in &parts {
            for nu in common::partitions(3, 6) {
                if lam.iter().sum::<i64>() + mu.iter().sum::<i64>() != nu.iter().sum::<i64>() {
                    continue;
                }
                let t = PartitionTriple::from_parts(lam, mu, &nu).unwrap();
                assert_eq!(positivity(&t), common::lr_tableaux(lam, mu, &nu) > 0, "{t}");
            }
        }
    }
}
