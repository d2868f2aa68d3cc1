use std::collections::BTreeSet;

use rigo_atlas::fixture;
use rigo_atlas::render::{render_map, StyleConfig, View, ViewSpec};
use rigo_atlas::{Atlas, Layer};

fn views(atlas: &Atlas) -> Vec<View> {
    let mut v = vec![View::National];
    v.extend(atlas.states().iter().cloned().map(View::State));
    v
}

/// The `<g class="...">` group with the given class, up to its closing tag.
fn group<'a>(svg: &'a str, class: &str) -> &'a str {
    let start = svg.find(&format!(r#"<g class="{class}""#)).unwrap_or_else(|| panic!("no {class} group"));
    let end = svg[start..].find("</g>").unwrap();
    &svg[start..start + end]
}

/// Everything except fill attributes and hatch overlays.
fn strokes(svg: &str) -> String {
    ["county-interior", "region-boundary", "outlines", "state-boundary", "national-outline"]
        .iter()
        .map(|c| group(svg, c))
        .collect::<Vec<_>>()
        .join("\n")
}

fn colour_literals(svg: &str) -> BTreeSet<String> {
    svg.match_indices('#')
        .filter_map(|(i, _)| {
            let hex = svg.get(i..i + 7)?;
            hex[1..].bytes().all(|b| b.is_ascii_hexdigit()).then(|| hex.to_string())
        })
        .collect()
}

#[test]
fn every_view_has_one_fill_per_county_and_is_repeatable() {
    let atlas = fixture::atlas();
    for view in views(&atlas) {
        for layer in Layer::ALL {
            let spec = ViewSpec::new(view.clone(), layer);
            let svg = render_map(&atlas, &spec).unwrap();
            let expected = match &view {
                View::National => atlas.counties().len(),
                View::State(s) => atlas.counties().iter().filter(|c| &c.state == s).count(),
            };
            assert_eq!(svg.matches(r#"class="county""#).count(), expected, "{view} {layer}");
            assert_eq!(render_map(&atlas, &spec).unwrap(), svg);
            assert!(svg.matches("<pattern").count() <= 1);
        }
    }
}

#[test]
fn only_style_colours_appear() {
    let atlas = fixture::atlas();
    let style = StyleConfig::default();
    let palette: BTreeSet<String> = style.palette().into_iter().map(str::to_string).collect();
    for layer in Layer::ALL {
        let svg = render_map(&atlas, &ViewSpec::new(View::National, layer)).unwrap();
        let used = colour_literals(&svg);
        assert!(used.is_subset(&palette), "{:?}", used.difference(&palette).collect::<Vec<_>>());
    }
}

#[test]
fn population_change_touches_fills_only() {
    let base = fixture::atlas();
    // C22 grows from 1100 to 90000: R2 stays the largest RIGO, but the
    // region boundaries and everything else stroked must not move
    let changed = fixture::atlas_with(|inputs| {
        inputs.geometry = inputs.geometry.replace(r#""population":1100"#, r#""population":90000"#);
    });
    assert_ne!(base.to_json(), changed.to_json());
    for layer in Layer::ALL {
        let spec = ViewSpec::new(View::National, layer);
        let (a, b) = (render_map(&base, &spec).unwrap(), render_map(&changed, &spec).unwrap());
        assert_eq!(strokes(&a), strokes(&b), "{layer}");
    }
}

#[test]
fn population_change_can_move_fill_steps() {
    let base = fixture::atlas();
    // R3 (C01 + C02) becomes the largest RIGO
    let changed = fixture::atlas_with(|inputs| {
        inputs.geometry = inputs.geometry.replace(r#""population":300"#, r#""population":900000"#);
    });
    let spec = ViewSpec::new(View::National, Layer::Rigo);
    let (a, b) = (render_map(&base, &spec).unwrap(), render_map(&changed, &spec).unwrap());
    assert_ne!(group(&a, "fills"), group(&b, "fills"));
    assert_eq!(strokes(&a), strokes(&b));
}

#[test]
fn affiliation_change_keeps_state_and_national_lines() {
    let base = fixture::atlas();
    // C21 joins R1 and M1
    let changed = fixture::atlas_with(|inputs| {
        inputs.affiliations = inputs.affiliations.replace("00009,,\n", "00009,R1,M1\n");
    });
    for view in views(&base) {
        for layer in Layer::ALL {
            let spec = ViewSpec::new(view.clone(), layer);
            let (a, b) = (render_map(&base, &spec).unwrap(), render_map(&changed, &spec).unwrap());
            for class in ["state-boundary", "national-outline"] {
                assert_eq!(group(&a, class), group(&b, class), "{view} {layer} {class}");
            }
        }
    }
    let spec = ViewSpec::new(View::National, Layer::Rigo);
    let (a, b) = (render_map(&base, &spec).unwrap(), render_map(&changed, &spec).unwrap());
    assert_ne!(group(&a, "region-boundary"), group(&b, "region-boundary"));
    assert_ne!(group(&a, "fills"), group(&b, "fills"));
}

#[test]
fn custom_canvas_size() {
    let atlas = fixture::atlas();
    let mut spec = ViewSpec::new(View::State("AA".into()), Layer::Both);
    spec.width = 400;
    spec.height = 800;
    let svg = render_map(&atlas, &spec).unwrap();
    assert!(svg.contains(r#"viewBox="0 0 400 800""#));
    // AA is 2 wide and 4 tall: height-limited? 400*0.9/2 = 180, 800*0.9/4 = 180
    assert!(svg.contains("M200.00 760.00"), "{}", group(&svg, "fills"));
}
