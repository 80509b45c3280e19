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
