//! Rendering provenance DAGs: Graphviz dot, a JSON interchange form with a
//! lossless parser, and an indented text tree.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::event::Event;
use crate::tracker::{DagNode, ProcessorId, ProvenanceDag, Side, StreamPointer};

/// Stable node identifier used in dot and JSON output.
fn node_id(ptr: &StreamPointer) -> String {
    format!("p{}_{}{}_{}", ptr.processor, ptr.side.label(), ptr.pipe, ptr.position)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the DAG in Graphviz dot syntax. Nodes are emitted in pointer
/// order and edges in sorted order, so output is deterministic for a given
/// DAG. Source leaves are filled; the root gets a bold border.
pub fn export_dot(dag: &ProvenanceDag, ascii: bool) -> String {
    let mut order: Vec<usize> = (0..dag.nodes.len()).collect();
    order.sort_by_key(|&i| dag.nodes[i].pointer);
    let mut out = String::from("digraph provenance {\n  node [shape=box];\n");
    for i in order {
        let n = &dag.nodes[i];
        let value = n.value.as_ref().map(|v| v.render(ascii)).unwrap_or_default();
        let label = format!("{}\\n{} = {}", dot_escape(&n.processor_name), n.pointer, value);
        let mut attrs = format!("label=\"{}\"", label);
        if n.is_source {
            attrs.push_str(", style=filled, fillcolor=lightgrey");
        }
        if i == 0 {
            attrs.push_str(", penwidth=2");
        }
        out.push_str(&format!("  {} [{}];\n", node_id(&n.pointer), attrs));
    }
    let mut edges: Vec<(String, String)> = dag
        .edges
        .iter()
        .map(|&(f, t)| (node_id(&dag.nodes[f].pointer), node_id(&dag.nodes[t].pointer)))
        .collect();
    edges.sort();
    edges.dedup();
    for (f, t) in edges {
        out.push_str(&format!("  {} -> {};\n", f, t));
    }
    out.push_str("}\n");
    out
}

fn event_to_json(e: &Event) -> Value {
    match e {
        Event::Bool(b) => json!(b),
        Event::Number(n) => json!(n),
        Event::Text(s) => json!(s),
        Event::Tuple(fields) => {
            let mut obj = Map::new();
            obj.insert(
                "tuple".to_string(),
                Value::Array(
                    fields.iter().map(|(k, v)| json!([k, event_to_json(v)])).collect(),
                ),
            );
            Value::Object(obj)
        }
    }
}

fn event_from_json(v: &Value) -> Result<Event, JsonError> {
    match v {
        Value::Bool(b) => Ok(Event::Bool(*b)),
        Value::Number(n) => {
            n.as_f64().map(Event::Number).ok_or(JsonError::Shape("non-finite number"))
        }
        Value::String(s) => Ok(Event::text(s.clone())),
        Value::Object(obj) => {
            let fields = obj
                .get("tuple")
                .and_then(Value::as_array)
                .ok_or(JsonError::Shape("tuple object without 'tuple' array"))?;
            let mut parsed = Vec::with_capacity(fields.len());
            for f in fields {
                let pair = f.as_array().filter(|p| p.len() == 2).ok_or(JsonError::Shape(
                    "tuple field must be a [name, value] pair",
                ))?;
                let name = pair[0].as_str().ok_or(JsonError::Shape("field name must be text"))?;
                parsed.push((name.to_string(), event_from_json(&pair[1])?));
            }
            Ok(Event::Tuple(parsed))
        }
        _ => Err(JsonError::Shape("unsupported value kind")),
    }
}

/// Serializes the DAG to JSON. Node order is preserved (the root is node 0)
/// and edges are sorted, so serialization is deterministic.
pub fn export_json(dag: &ProvenanceDag) -> String {
    let nodes: Vec<Value> = dag
        .nodes
        .iter()
        .map(|n| {
            json!({
                "id": node_id(&n.pointer),
                "processor": n.pointer.processor.0,
                "name": n.processor_name,
                "side": n.pointer.side.label(),
                "pipe": n.pointer.pipe,
                "position": n.pointer.position,
                "source": n.is_source,
                "value": n.value.as_ref().map(event_to_json),
            })
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = dag.edges.clone();
    edges.sort_unstable();
    edges.dedup();
    let edges: Vec<Value> = edges.into_iter().map(|(f, t)| json!([f, t])).collect();
    serde_json::to_string_pretty(&json!({ "nodes": nodes, "edges": edges })).unwrap()
}

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unexpected document shape: {0}")]
    Shape(&'static str),
    #[error("edge endpoint {0} out of range")]
    EdgeOutOfRange(usize),
}

/// Parses a DAG previously produced by [`export_json`].
pub fn parse_json(text: &str) -> Result<ProvenanceDag, JsonError> {
    let doc: Value = serde_json::from_str(text)?;
    let nodes_json =
        doc.get("nodes").and_then(Value::as_array).ok_or(JsonError::Shape("missing 'nodes'"))?;
    let mut nodes = Vec::with_capacity(nodes_json.len());
    for n in nodes_json {
        let get_u = |k: &str| {
            n.get(k).and_then(Value::as_u64).ok_or(JsonError::Shape("missing numeric field"))
        };
        let side = match n.get("side").and_then(Value::as_str) {
            Some("in") => Side::Input,
            Some("out") => Side::Output,
            _ => return Err(JsonError::Shape("side must be 'in' or 'out'")),
        };
        let value = match n.get("value") {
            None | Some(Value::Null) => None,
            Some(v) => Some(event_from_json(v)?),
        };
        nodes.push(DagNode {
            pointer: StreamPointer {
                processor: ProcessorId(get_u("processor")?),
                side,
                pipe: get_u("pipe")? as usize,
                position: get_u("position")? as usize,
            },
            value,
            processor_name: n
                .get("name")
                .and_then(Value::as_str)
                .ok_or(JsonError::Shape("missing 'name'"))?
                .to_string(),
            is_source: n.get("source").and_then(Value::as_bool).unwrap_or(false),
        });
    }
    let edges_json =
        doc.get("edges").and_then(Value::as_array).ok_or(JsonError::Shape("missing 'edges'"))?;
    let mut edges = Vec::with_capacity(edges_json.len());
    for e in edges_json {
        let pair = e.as_array().filter(|p| p.len() == 2).ok_or(JsonError::Shape(
            "edge must be a [from, to] pair",
        ))?;
        let f = pair[0].as_u64().ok_or(JsonError::Shape("edge endpoint must be a number"))? as usize;
        let t = pair[1].as_u64().ok_or(JsonError::Shape("edge endpoint must be a number"))? as usize;
        if f >= nodes.len() {
            return Err(JsonError::EdgeOutOfRange(f));
        }
        if t >= nodes.len() {
            return Err(JsonError::EdgeOutOfRange(t));
        }
        edges.push((f, t));
    }
    Ok(ProvenanceDag::from_parts(nodes, edges))
}

/// Renders the DAG as an indented tree expanded from the root. A node that
/// was already printed is referenced instead of re-expanded, so sharing
/// stays visible without duplication.
pub fn render_text(dag: &ProvenanceDag, ascii: bool) -> String {
    let mut out = String::new();
    let mut printed = vec![false; dag.nodes.len()];
    render_node(dag, 0, 0, ascii, &mut printed, &mut out);
    out
}

fn render_node(
    dag: &ProvenanceDag,
    node: usize,
    depth: usize,
    ascii: bool,
    printed: &mut [bool],
    out: &mut String,
) {
    let n = &dag.nodes[node];
    let value = n.value.as_ref().map(|v| v.render(ascii)).unwrap_or_default();
    out.push_str(&"  ".repeat(depth));
    out.push_str(&format!("{} = {}  [{}]", n.pointer, value, n.processor_name));
    if n.is_source {
        out.push_str("  <source>");
    }
    if printed[node] {
        out.push_str("  (see above)\n");
        return;
    }
    out.push('\n');
    printed[node] = true;
    let mut children = dag.children_of(node);
    children.sort_by_key(|&c| dag.nodes[c].pointer);
    for c in children {
        render_node(dag, c, depth + 1, ascii, printed, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracker::{Association, EventTracker};

    fn sample_dag() -> ProvenanceDag {
        let mut t = EventTracker::new();
        let a = ProcessorId(0);
        let b = ProcessorId(1);
        t.register_processor(a, "Fork");
        t.register_processor(b, "Join");
        t.register_source(a, 0);
        t.register_connection(crate::tracker::ConnectionRecord {
            upstream: (a, 0),
            downstream: (b, 0),
        });
        t.register_connection(crate::tracker::ConnectionRecord {
            upstream: (a, 1),
            downstream: (b, 1),
        });
        t.record_value(a, Side::Input, 0, Event::number(5));
        t.record_value(a, Side::Output, 0, Event::number(5));
        t.record_value(a, Side::Output, 1, Event::number(5));
        t.record_value(b, Side::Input, 0, Event::number(5));
        t.record_value(b, Side::Input, 1, Event::number(5));
        t.record_value(b, Side::Output, 0, Event::number(10));
        for (p, op, ip) in [(0u64, 0, 0), (0, 1, 0), (1, 0, 0)] {
            t.associate(Association {
                processor: ProcessorId(p),
                out_pipe: op,
                out_pos: 0,
                in_pipe: ip,
                in_pos: 0,
            });
        }
        t.associate(Association {
            processor: ProcessorId(1),
            out_pipe: 0,
            out_pos: 0,
            in_pipe: 1,
            in_pos: 0,
        });
        t.get_provenance_tree(StreamPointer::output(b, 0, 0)).unwrap()
    }

    #[test]
    fn dot_output_is_deterministic_and_well_formed() {
        let dag = sample_dag();
        let dot = export_dot(&dag, false);
        assert_eq!(dot, export_dot(&dag, false));
        assert!(dot.starts_with("digraph provenance {"));
        assert!(dot.contains("p1_out0_0"));
        assert!(dot.contains("->"));
        assert!(dot.trim_end().ends_with('}'));
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let dag = sample_dag();
        let text = export_json(&dag);
        let parsed = parse_json(&text).unwrap();
        assert_eq!(parsed.nodes, dag.nodes);
        assert_eq!(export_json(&parsed), text);
    }

    #[test]
    fn json_rejects_bad_documents() {
        assert!(matches!(parse_json("not json"), Err(JsonError::Syntax(_))));
        assert!(matches!(parse_json("{\"edges\": []}"), Err(JsonError::Shape(_))));
        let orphan = "{\"nodes\": [], \"edges\": [[0, 1]]}";
        assert!(matches!(parse_json(orphan), Err(JsonError::EdgeOutOfRange(0))));
    }

    #[test]
    fn text_tree_marks_shared_nodes() {
        let dag = sample_dag();
        let text = render_text(&dag, true);
        assert!(text.contains("(see above)"));
        assert!(text.contains("<source>"));
        // root on the first line, children indented
        assert!(text.starts_with("p1.out0@0"));
        assert!(text.lines().nth(1).unwrap().starts_with("  "));
    }

    #[test]
    fn tuple_values_survive_the_round_trip() {
        let e = Event::tuple(vec![("id", Event::number(2)), ("action", Event::text("a"))]);
        let back = event_from_json(&event_to_json(&e)).unwrap();
        assert_eq!(back, e);
    }
}
