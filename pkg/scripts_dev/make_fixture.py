"""Dev helper: generate the bundled method fixture (source + AST JSON)."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ccreduce.metrics import compute_cc, sequence_metrics, ccr
from ccreduce.tree import AstNode, NodeKind, dump_tree

SOURCE = """\
public void routeAPacketTo(IPAddress ip, int ttl, List<Host> usedHosts) throws Exception {
    usedHosts.add(this);
    if (ttl == 0) throw new Exception("Routing problem: TTL expired");
    if (!hasIP(ip)) {
        Host nextHost = null; List<Host> hosts = getDirectlyAccessibleHosts();
        for (Host h : hosts)
            if (h.hasIP(ip)) nextHost = h;
        if (nextHost != null) nextHost.routeAPacketTo(ip, ttl - 1, usedHosts);
        else {
            List<Host> direct = getDirectlyAccessibleHosts();
            IPAddress nextIP = getRoutingTable().getNextHop(ip);
            boolean found = false;
            for (Host h : direct) {
                if (h.hasIP(nextIP)) {
                    h.routeAPacketTo(ip, ttl - 1, usedHosts);
                    found = true;
                }
            }
            if (!found)
                throw new Exception("Routing problem: no route to destination");
        }
    }
}
"""

LINES = SOURCE.split("\n")
LINE_START = []
pos = 0
for line in LINES:
    LINE_START.append(pos)
    pos += len(line) + 1


def off(line_no, fragment, occurrence=0):
    """Offset of the start of `fragment` in 1-based line `line_no`."""
    line = LINES[line_no - 1]
    idx = -1
    for _ in range(occurrence + 1):
        idx = line.index(fragment, idx + 1)
    return LINE_START[line_no - 1] + idx


def line_end(line_no):
    """Offset of the last character of the line (inclusive)."""
    return LINE_START[line_no - 1] + len(LINES[line_no - 1]) - 1


def node(kind, sl, el, so, eo, children=()):
    return AstNode(kind=kind, start_line=sl, end_line=el, start_offset=so,
                   end_offset=eo, children=tuple(children))


stmt_add = node(NodeKind.STATEMENT, 2, 2, off(2, "usedHosts"), line_end(2))

throw_ttl = node(NodeKind.STATEMENT, 3, 3, off(3, "throw"), line_end(3))
if_ttl = node(NodeKind.IF, 3, 3, off(3, "if"), line_end(3), [throw_ttl])

s_next_null = node(NodeKind.STATEMENT, 5, 5, off(5, "Host nextHost"),
                   LINE_START[4] + LINES[4].index("null;") + 4)
s_hosts = node(NodeKind.STATEMENT, 5, 5, off(5, "List<Host> hosts"), line_end(5))

s_assign_next = node(NodeKind.STATEMENT, 7, 7, off(7, "nextHost = h"), line_end(7))
if_neighbour = node(NodeKind.IF, 7, 7, off(7, "if"), line_end(7), [s_assign_next])
for_hosts = node(NodeKind.FOR, 6, 7, off(6, "for"), line_end(7), [if_neighbour])

s_route_next = node(NodeKind.STATEMENT, 8, 8, off(8, "nextHost.routeAPacketTo"),
                    line_end(8))
if_next = node(NodeKind.IF, 8, 8, off(8, "if"), line_end(8), [s_route_next])

s_direct = node(NodeKind.STATEMENT, 10, 10, off(10, "List<Host> direct"), line_end(10))
s_nextip = node(NodeKind.STATEMENT, 11, 11, off(11, "IPAddress"), line_end(11))
s_found = node(NodeKind.STATEMENT, 12, 12, off(12, "boolean"), line_end(12))

s_route2 = node(NodeKind.STATEMENT, 15, 15, off(15, "h.routeAPacketTo"), line_end(15))
s_found_true = node(NodeKind.STATEMENT, 16, 16, off(16, "found = true"), line_end(16))
if_nextip = node(NodeKind.IF, 14, 17, off(14, "if"),
                 LINE_START[16] + LINES[16].rindex("}"), [s_route2, s_found_true])
for_direct = node(NodeKind.FOR, 13, 18, off(13, "for"),
                  LINE_START[17] + LINES[17].rindex("}"), [if_nextip])

throw_route = node(NodeKind.STATEMENT, 20, 20, off(20, "throw"), line_end(20))
if_found = node(NodeKind.IF, 19, 20, off(19, "if"), line_end(20), [throw_route])

else_node = node(NodeKind.ELSE, 9, 21, off(9, "else"),
                 LINE_START[20] + LINES[20].rindex("}"),
                 [s_direct, s_nextip, s_found, for_direct, if_found])

if_has_ip = node(NodeKind.IF, 4, 22, off(4, "if"),
                 LINE_START[21] + LINES[21].rindex("}"),
                 [s_next_null, s_hosts, for_hosts, if_next, else_node])

method = node(NodeKind.METHOD, 1, 23, 0, line_end(23),
              [stmt_add, if_ttl, if_has_ip])

cc = compute_cc(method)
print("compute_cc:", cc)
assert cc == 20, cc

golden = [
    ("if (ttl == 0)", [if_ttl], (0, 1, 0, 0, 1, 1)),
    ("if (!hasIP)", [if_has_ip], (0, 8, 11, 6, 19, 19)),
    ("first for", [for_hosts], (1, 2, 1, 2, 5, 3)),
    ("if neighbour", [if_neighbour], (2, 1, 0, 1, 3, 1)),
    ("if nextHost + else", [if_next, else_node], (1, 5, 4, 4, 13, 9)),
    ("second for", [for_direct], (2, 2, 1, 2, 7, 3)),
    ("if nextIP", [if_nextip], (3, 1, 0, 1, 4, 1)),
    ("if !found", [if_found], (2, 1, 0, 1, 3, 1)),
]
for name, seq, (lam, iota, nu, mu, ccr0, nmcc) in golden:
    m = sequence_metrics(method, seq)
    got = (m.lam, m.iota, m.nu, m.mu, ccr(m, 0), m.nmcc)
    status = "ok " if got == (lam, iota, nu, mu, ccr0, nmcc) else "FAIL"
    print(f"{status} {name:22s} got {got} want {(lam, iota, nu, mu, ccr0, nmcc)}")
    assert got == (lam, iota, nu, mu, ccr0, nmcc), name

m_else = sequence_metrics(method, [else_node])
print("else-rooted:", (m_else.lam, m_else.iota, m_else.nu, m_else.mu,
                       ccr(m_else, 0), m_else.nmcc))

whole = sequence_metrics(method, [method])
assert whole.nmcc == 20 and whole.lam == 0

out_dir = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
out_dir.mkdir(parents=True, exist_ok=True)
(out_dir / "route_a_packet_to.java").write_text(SOURCE, encoding="utf-8")
(out_dir / "route_a_packet_to.json").write_text(
    json.dumps(dump_tree(method), indent=2) + "\n", encoding="utf-8")
print("fixture written to", out_dir)
