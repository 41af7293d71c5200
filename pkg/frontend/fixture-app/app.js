/* Toy graph viewer: renders node/edge counts and a tiny canvas drawing from
 * a payload delivered either as a DOM CustomEvent or, when the event fired
 * before this script could listen, via the window.__NOVA_PAYLOAD__ global. */
(function () {
  "use strict";

  var state = { rendered: false };

  function isGraph(value) {
    return (
      !!value &&
      typeof value === "object" &&
      Array.isArray(value.nodes) &&
      Array.isArray(value.links)
    );
  }

  /* Accept the graph directly, or wrapped as {data: graph} — the shape a
   * generated wrapper API sends when its parameter is named "data". */
  function toGraph(payload) {
    if (isGraph(payload)) {
      return payload;
    }
    if (payload && typeof payload === "object" && isGraph(payload.data)) {
      return payload.data;
    }
    return null;
  }

  function setText(id, text) {
    var el = document.getElementById(id);
    if (el) {
      el.textContent = text;
    }
  }

  function draw(graph) {
    var canvas = document.getElementById("graph-canvas");
    if (!canvas || typeof canvas.getContext !== "function") {
      return;
    }
    var ctx = null;
    try {
      ctx = canvas.getContext("2d");
    } catch (err) {
      ctx = null;
    }
    if (!ctx) {
      return;
    }
    var w = canvas.width;
    var h = canvas.height;
    ctx.clearRect(0, 0, w, h);
    var n = graph.nodes.length;
    if (n === 0) {
      return;
    }
    // simple deterministic circle layout
    var cx = w / 2;
    var cy = h / 2;
    var r = Math.min(w, h) / 2 - 20;
    var pos = {};
    graph.nodes.forEach(function (node, i) {
      var angle = (2 * Math.PI * i) / n;
      pos[node.id] = { x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) };
    });
    ctx.strokeStyle = "#666";
    graph.links.forEach(function (link) {
      var a = pos[link.source];
      var b = pos[link.target];
      if (!a || !b) {
        return;
      }
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(b.x, b.y);
      ctx.stroke();
    });
    ctx.fillStyle = "#4b0082";
    graph.nodes.forEach(function (node) {
      var p = pos[node.id];
      ctx.beginPath();
      ctx.arc(p.x, p.y, 6, 0, 2 * Math.PI);
      ctx.fill();
    });
  }

  function render(payload) {
    state.rendered = true;
    var graph = toGraph(payload);
    if (!graph) {
      setText("node-count", "invalid payload");
      setText("status-line", "payload rejected");
      return;
    }
    setText("node-count", String(graph.nodes.length));
    setText("edge-count", String(graph.links.length));
    setText("status-line", "rendered");
    draw(graph);
  }

  var eventName =
    typeof window.__NOVA_EVENT__ === "string" ? window.__NOVA_EVENT__ : "novaData";
  window.addEventListener(eventName, function (event) {
    render(event.detail);
  });

  function pullPayload() {
    if (state.rendered) {
      return;
    }
    if (typeof window.__NOVA_PAYLOAD__ !== "undefined") {
      render(window.__NOVA_PAYLOAD__);
    } else {
      render({ nodes: [], links: [] });
    }
  }

  if (document.readyState === "complete") {
    pullPayload();
  } else {
    window.addEventListener("load", pullPayload);
  }

  // model.wasm ships via the embedded asset map in bundled form; its absence
  // (raw checkout without a server) must not break anything.
  if (typeof window.fetch === "function") {
    try {
      window
        .fetch("model.wasm")
        .then(function (response) {
          if (response && response.ok) {
            document.body.setAttribute("data-model", "loaded");
          }
        })
        .catch(function () {});
    } catch (err) {
      /* no usable fetch in this environment */
    }
  }
})();
