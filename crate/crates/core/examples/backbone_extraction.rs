// Backbone of an invasion window between the origin and the box boundary,
// checked against the flow characterisation and a two-path certificate.
use percolab::invasion::{grow, StopRule};
use percolab::metrics::{backbone, backbone_certificate, backbone_flow_oracle, BackboneQuery};
use percolab::{BoxRegion, WeightField};

fn main() -> percolab::Result<()> {
    let n = 16;
    let cluster = grow(&WeightField::new(3), &StopRule::for_window(n))?;
    let g = cluster.window(BoxRegion::centered(n))?;
    let q = BackboneQuery::origin_to_boundary(&g, n);
    let bb = backbone(&g, &q)?;
    println!("window {} sites, backbone {} sites", g.site_count(), bb.len());

    let mut agree = 0;
    for &x in g.sites() {
        if backbone_flow_oracle(&g, &q, x)? == bb.contains(&x) {
            agree += 1;
        }
    }
    println!("flow oracle agrees on {agree}/{} sites", g.site_count());

    if let Some(&x) = g.sites().iter().filter(|s| bb.contains(*s)).max_by_key(|s| s.norm_inf()) {
        if let Some((to_source, to_target)) = backbone_certificate(&g, &q, x)? {
            println!("{x}: {} steps to the origin, {} to the boundary", to_source.len() - 1, to_target.len() - 1);
        }
    }
    Ok(())
}
