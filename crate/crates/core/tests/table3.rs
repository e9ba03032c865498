use netshare::inventory::ElementClass::{self, *};
use netshare::sharing::{sharing_level, Level};
use netshare::{Preset, SharingConfiguration};

const ROWS: [ElementClass; 6] = [PassiveSite, NodeB, Rnc, Backhaul, SpectrumLicense, CoreSgsn];

/// Shared-element matrix, one column per configuration, rows as in `ROWS`.
const MATRIX: [(&str, [bool; 6]); 6] = [
    ("MOCN", [true, true, true, false, true, false]),
    ("MOCN + Backhaul", [true, true, true, true, true, false]),
    ("MOCN - Spectrum", [true, true, true, true, false, false]),
    ("GWCN", [true, true, true, false, true, true]),
    ("GWCN + Backhaul", [true, true, true, true, true, true]),
    ("GWCN - Spectrum", [true, true, true, true, false, true]),
];

#[test]
fn use_case_columns_match_matrix_cell_by_cell() {
    let mut cells = 0;
    for (name, column) in MATRIX {
        let cfg = SharingConfiguration::from_preset_name(name).unwrap();
        for (class, expected) in ROWS.iter().zip(column) {
            assert_eq!(cfg.is_shared(*class), expected, "{name} / {class}");
            cells += 1;
        }
    }
    assert_eq!(cells, 36);
}

#[test]
fn use_case_presets_share_nothing_outside_the_matrix() {
    for p in Preset::USE_CASE {
        let cfg = SharingConfiguration::preset(p);
        for c in ElementClass::ALL {
            if !ROWS.contains(&c) {
                assert!(!cfg.is_shared(c), "{} shares {c}", p.name());
            }
        }
    }
}

#[test]
fn preset_order_matches_columns() {
    let names: Vec<&str> = Preset::USE_CASE.iter().map(|p| p.name()).collect();
    let expected: Vec<&str> = MATRIX.iter().map(|(n, _)| *n).collect();
    assert_eq!(names, expected);
}

#[test]
fn levels_of_presets() {
    let level = |p| sharing_level(&SharingConfiguration::preset(p)).unwrap();
    let gwcn = level(Preset::Gwcn);
    assert_eq!(gwcn.level, Level::L5Core);
    assert!(gwcn.non_contiguous);
    let passive = level(Preset::PassiveOnly);
    assert_eq!(passive.level, Level::L1Site);
    assert!(!passive.non_contiguous);
    assert_eq!(level(Preset::SiteAntenna).level, Level::L2Antenna);
    assert_eq!(level(Preset::Mocn).level, Level::L4Rnc);
}

#[test]
fn nine_presets_plus_alias() {
    assert_eq!(Preset::ALL.len(), 9);
    for p in Preset::ALL {
        assert_eq!(p.name().parse::<Preset>().unwrap(), p);
    }
    assert_eq!("MORAN".parse::<Preset>().unwrap(), Preset::Moran);
    assert!("MOCN+Backhaul".parse::<Preset>().is_err());
}
