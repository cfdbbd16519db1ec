#!/usr/bin/env python3
"""Reference model providers over HTTP for `providers.* = "http"`.

Endpoints (POST, JSON):
  /segment {text}                      -> {spans: [[start, end], ...]}
  /parse   {sentence_id, text}         -> {tokens: [{text, lemma, pos, tag, dep, head, ent}]}
  /srl     {sentence_id, text}         -> {qa: [{verb, verb_lemma, question, answer}]}
  /embed   {model, texts}              -> {vectors: [[...], ...]}
  /nli     {model, pairs: [[p, h]]}    -> {scores: [[entail, neutral, contradict], ...]}
GET /health lists what is available.

Parsing and segmentation use spaCy when it is installed. Embeddings use
sentence-transformers, NLI a sentence-transformers CrossEncoder; model
weights must already be in the local cache. With --replay DIR, /parse and
/srl answer from recorded <sentence_id>.json files (DIR/parse, DIR/srl), the
layout of fixtures/.

Usage: provider_server.py [--host H] [--port P] [--replay fixtures]
"""
import argparse
import json
import logging
import re
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

log = logging.getLogger("provider_server")

NLI_LABELS = {
    # Output order of the cross-encoder NLI heads.
    "cross-encoder/nli-deberta-v3-base": ["contradiction", "entailment", "neutral"],
}


class Unavailable(Exception):
    pass


class Models:
    def __init__(self, replay, spacy_model):
        self.replay = Path(replay) if replay else None
        self.spacy_model = spacy_model
        self._lock = threading.Lock()
        self._nlp = None
        self._embedders = {}
        self._nli = {}

    def nlp(self):
        with self._lock:
            if self._nlp is None:
                try:
                    import spacy
                    self._nlp = spacy.load(self.spacy_model)
                except Exception as e:  # missing package or model
                    raise Unavailable(f"spaCy model {self.spacy_model}: {e}")
            return self._nlp

    def embedder(self, name):
        with self._lock:
            if name not in self._embedders:
                try:
                    from sentence_transformers import SentenceTransformer
                    self._embedders[name] = SentenceTransformer(name)
                except Exception as e:
                    raise Unavailable(f"embedding model {name}: {e}")
            return self._embedders[name]

    def cross_encoder(self, name):
        with self._lock:
            if name not in self._nli:
                try:
                    from sentence_transformers import CrossEncoder
                    self._nli[name] = CrossEncoder(name)
                except Exception as e:
                    raise Unavailable(f"NLI model {name}: {e}")
            return self._nli[name]

    def recorded(self, kind, sentence_id):
        if self.replay is None:
            return None
        path = self.replay / kind / f"{sentence_id}.json"
        if not path.exists():
            raise KeyError(f"no recorded {kind} for {sentence_id}")
        return json.loads(path.read_text())


SENTENCE_END = re.compile(r"(?<=[.!?])[\"')\]]*\s+(?=[A-Z0-9\"'(])")


def segment(models, text):
    try:
        doc = models.nlp()(text)
        return [[s.start_char, s.end_char] for s in doc.sents if s.text.strip()]
    except Unavailable:
        spans, start = [], 0
        for m in SENTENCE_END.finditer(text):
            spans.append([start, m.start()])
            start = m.end()
        if text[start:].strip():
            spans.append([start, len(text.rstrip())])
        return spans


def parse(models, req):
    recorded = models.recorded("parse", req["sentence_id"])
    if recorded is not None:
        return recorded
    doc = models.nlp()(req["text"])
    return {"tokens": [{"text": t.text, "lemma": t.lemma_, "pos": t.pos_, "tag": t.tag_,
                        "dep": t.dep_, "head": t.head.i, "ent": t.ent_type_} for t in doc]}


def srl(models, req):
    recorded = models.recorded("srl", req["sentence_id"])
    if recorded is not None:
        return {"qa": recorded}
    raise Unavailable("no QA-SRL model; run with --replay")


def embed(models, req):
    model = models.embedder(req["model"])
    vectors = model.encode(req["texts"], convert_to_numpy=True, normalize_embeddings=True)
    return {"vectors": vectors.tolist()}


def nli(models, req):
    import numpy as np
    name = req["model"]
    labels = NLI_LABELS.get(name)
    if labels is None:
        raise Unavailable(f"unknown label order for NLI model {name}")
    logits = np.asarray(models.cross_encoder(name).predict([tuple(p) for p in req["pairs"]]))
    logits = logits.reshape(len(req["pairs"]), len(labels))
    probs = np.exp(logits - logits.max(axis=1, keepdims=True))
    probs /= probs.sum(axis=1, keepdims=True)
    idx = [labels.index(k) for k in ("entailment", "neutral", "contradiction")]
    return {"scores": probs[:, idx].tolist()}


ROUTES = {"/segment": lambda m, r: {"spans": segment(m, r["text"])},
          "/parse": parse, "/srl": srl, "/embed": embed, "/nli": nli}


def make_handler(models):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def _send(self, status, body):
            data = json.dumps(body).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_GET(self):
            if self.path != "/health":
                return self._send(404, {"error": {"code": "not_found", "message": self.path}})
            self._send(200, {"status": "ok", "replay": str(models.replay or ""),
                             "endpoints": sorted(ROUTES)})

        def do_POST(self):
            route = ROUTES.get(self.path)
            if route is None:
                return self._send(404, {"error": {"code": "not_found", "message": self.path}})
            try:
                length = int(self.headers.get("Content-Length", 0))
                req = json.loads(self.rfile.read(length) or b"{}")
                self._send(200, route(models, req))
            except Unavailable as e:
                self._send(503, {"error": {"code": "unavailable", "message": str(e)}})
            except (KeyError, ValueError, TypeError) as e:
                self._send(400, {"error": {"code": "bad_request", "message": str(e)}})

        def log_message(self, fmt, *args):
            log.debug(fmt, *args)

    return Handler


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8090)
    ap.add_argument("--replay", help="directory with parse/ and srl/ recordings")
    ap.add_argument("--spacy-model", default="en_core_web_trf")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="[%(levelname)s] %(message)s")
    server = ThreadingHTTPServer((args.host, args.port), make_handler(Models(args.replay,
                                                                            args.spacy_model)))
    # The bound port, for callers that asked for port 0.
    print(f"listening on http://{args.host}:{server.server_address[1]}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
