#!/usr/bin/env python3
# Copyright (c) 2026 The evotrack Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the two-version fixture projects under tests/fixtures/.

Fingerprints are computed here with an independent FNV-1a/64 so the C++
fingerprint function can be checked against them.
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent

EVENT = "java.awt.event.ActionEvent"

SOURCES_COMMON = {
    "com/app/actions/NewAction.java": """package com.app.actions;

import com.app.model.MindMap;

public class NewAction {
    public void actionPerformed(java.awt.event.ActionEvent e) {
        MindMap.create();
    }
}
""",
    "com/app/actions/SaveAction.java": """package com.app.actions;

import com.app.io.MapWriter;

public class SaveAction {
    private final MapWriter writer = new MapWriter();

    public void actionPerformed(java.awt.event.ActionEvent e) {
        writer.write();
    }
}
""",
    "com/app/model/MindMap.java": """package com.app.model;

public class MindMap {
    public static MindMap create() {
        MindMap map = new MindMap();
        map.addRoot(new Node("root"));
        return map;
    }

    public void addRoot(Node root) {
        root.attach(this);
    }
}
""",
    "com/app/model/Node.java": """package com.app.model;

public class Node {
    private final String title;
    private Node parent;

    public Node(String title) { this.title = title; }

    public void attach(MindMap map) {
        if (parent != null) {
            parent.attach(map);
        }
    }
}
""",
    "com/app/io/Backup.java": """package com.app.io;

public class Backup {
    public static void rotate() {
        // keep three generations
    }
}
""",
    "com/app/prefs/PrefsDialog.java": """package com.app.prefs;

import java.io.FileOutputStream;

public class PrefsDialog {
    private FileOutputStream out;

    public void onOk(java.awt.event.ActionEvent e) throws java.io.IOException {
        out.write(new byte[0]);
    }

    public void onCancel(java.awt.event.ActionEvent e) {
        setVisible(false);
    }

    private void setVisible(boolean v) {}
}
""",
}

MAPWRITER_V1 = """package com.app.io;

import java.io.FileOutputStream;

public class MapWriter {
    private FileOutputStream file;

    public void write() {
        byte[] data = new byte[0];
        Backup.rotate();
        file.write(data);
    }
}
"""

MAPWRITER_V2 = MAPWRITER_V1.replace("        Backup.rotate();\n", "        file.flush();\n")

EXPORT_ACTION = """package com.app.actions;

import com.app.io.MapWriter;

public class ExportAction {
    public void actionPerformed(java.awt.event.ActionEvent e) {
        new MapWriter().write();
    }
}
"""

# sig -> (file, method-header marker)
APP_METHODS = {
    f"com.app.actions.NewAction#actionPerformed({EVENT}):void": ("com/app/actions/NewAction.java", "public void actionPerformed"),
    f"com.app.actions.SaveAction#actionPerformed({EVENT}):void": ("com/app/actions/SaveAction.java", "public void actionPerformed"),
    "com.app.model.MindMap#create():com.app.model.MindMap": ("com/app/model/MindMap.java", "public static MindMap create"),
    "com.app.model.MindMap#addRoot(com.app.model.Node):void": ("com/app/model/MindMap.java", "public void addRoot"),
    "com.app.model.Node#attach(com.app.model.MindMap):void": ("com/app/model/Node.java", "public void attach"),
    "com.app.io.MapWriter#write():void": ("com/app/io/MapWriter.java", "public void write"),
    "com.app.io.Backup#rotate():void": ("com/app/io/Backup.java", "public static void rotate"),
    f"com.app.prefs.PrefsDialog#onOk({EVENT}):void": ("com/app/prefs/PrefsDialog.java", "public void onOk"),
    f"com.app.prefs.PrefsDialog#onCancel({EVENT}):void": ("com/app/prefs/PrefsDialog.java", "public void onCancel"),
}
EXPORT_SIG = f"com.app.actions.ExportAction#actionPerformed({EVENT}):void"
FRAMEWORK_SIG = "java.io.FileOutputStream#write(byte[]):void"
PLATFORM_HANDLER = "javax.swing.plaf.basic.BasicButtonListener#mousePressed(java.awt.event.MouseEvent):void"

NEW = f"com.app.actions.NewAction#actionPerformed({EVENT}):void"
SAVE = f"com.app.actions.SaveAction#actionPerformed({EVENT}):void"
CREATE = "com.app.model.MindMap#create():com.app.model.MindMap"
ADDROOT = "com.app.model.MindMap#addRoot(com.app.model.Node):void"
ATTACH = "com.app.model.Node#attach(com.app.model.MindMap):void"
WRITE = "com.app.io.MapWriter#write():void"
ROTATE = "com.app.io.Backup#rotate():void"
ONOK = f"com.app.prefs.PrefsDialog#onOk({EVENT}):void"
ONCANCEL = f"com.app.prefs.PrefsDialog#onCancel({EVENT}):void"

EDGES_V1 = [
    [NEW, CREATE], [CREATE, ADDROOT], [ADDROOT, ATTACH], [ATTACH, ATTACH],
    [SAVE, WRITE], [WRITE, ROTATE], [WRITE, FRAMEWORK_SIG],
    [ONOK, FRAMEWORK_SIG],
]
EDGES_V2 = [e for e in EDGES_V1 if e != [WRITE, ROTATE]] + [[EXPORT_SIG, WRITE]]


def fnv1a64(data: bytes) -> str:
    h = 0xcbf29ce484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001b3) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"


def method_range(text: str, marker: str):
    lines = text.split("\n")
    start = next(i for i, l in enumerate(lines) if marker in l)
    depth = 0
    for i in range(start, len(lines)):
        depth += lines[i].count("{") - lines[i].count("}")
        if depth == 0 and "}" in lines[i]:
            return start + 1, i + 1, lines[start:i + 1]
    raise ValueError(marker)


def widget(wid, cls, props=None, handlers=None, children=None):
    return {"id": wid, "class": cls, "properties": props or {}, "handlers": handlers or [],
            "children": children or []}


def gui(version):
    button = "javax.swing.JButton"
    toolbar_children = [
        widget("main.new", button, {"text": "New", "name": "new", "x": "4"}, [NEW]),
        widget("main.save", button, {"text": "Save", "name": "save", "x": "40"}, [SAVE]),
    ]
    if version == 2:
        toolbar_children.append(
            widget("main.export", button, {"text": "Export", "name": "export", "x": "76"}, [EXPORT_SIG]))
    toolbar_children.append(
        widget("main.print", button, {"text": "Print", "name": "print", "x": "112" if version == 2 else "76"},
               [PLATFORM_HANDLER]))
    main_children = [widget("main.toolbar", "javax.swing.JToolBar", {"name": "toolbar"}, [], toolbar_children)]
    if version == 1:
        main_children.append(widget("main.status", "javax.swing.JLabel", {"text": "Ready", "name": "status"}))
    main = {"title": "MindMap Editor", "class": "com.app.MainFrame",
            "root": widget("main.root", "javax.swing.JRootPane", {}, [], main_children)}
    main["root"]["screenshot"] = "screens/main.png"
    prefs = {"title": "Preferences", "class": "com.app.prefs.PrefsDialog",
             "root": widget("prefs.root", "javax.swing.JRootPane", {}, [], [
                 widget("prefs.ok", button, {"text": "OK", "actionCommand": "ok"}, [ONOK]),
                 widget("prefs.cancel", button, {"text": "Cancel", "actionCommand": "cancel"}, [ONCANCEL]),
                 widget("prefs.theme", "javax.swing.JComboBox", {"name": "theme"}),
                 widget("prefs.autosave", "javax.swing.JCheckBox", {"text": "Autosave", "name": "autosave"}),
             ])}
    return {"windows": [main, prefs]}


def build(version):
    out = ROOT / f"v{version}"
    sources = dict(SOURCES_COMMON)
    sources["com/app/io/MapWriter.java"] = MAPWRITER_V1 if version == 1 else MAPWRITER_V2
    methods_map = dict(APP_METHODS)
    if version == 2:
        sources["com/app/actions/ExportAction.java"] = EXPORT_ACTION
        methods_map[EXPORT_SIG] = ("com/app/actions/ExportAction.java", "public void actionPerformed")
    for rel, text in sources.items():
        path = out / "src" / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)

    methods = []
    for sig, (rel, marker) in methods_map.items():
        start, end, lines = method_range(sources[rel], marker)
        body = "\n".join(l.rstrip(" \t\r\v\f") for l in lines).encode()
        methods.append({"sig": sig, "fingerprint": fnv1a64(body),
                        "source": {"path": rel, "start_line": start, "end_line": end}})
    methods.append({"sig": FRAMEWORK_SIG, "fingerprint": fnv1a64(b"native")})
    graph = {"methods": methods, "edges": EDGES_V1 if version == 1 else EDGES_V2}

    (out / "callgraph.json").write_text(json.dumps(graph, indent=2) + "\n")
    (out / "gui.json").write_text(json.dumps(gui(version), indent=2) + "\n")
    (out / "rules.json").write_text(json.dumps({
        "rules": [{"prefix": "com.app.", "category": "application"},
                  {"prefix": "org.apache.", "category": "library"}],
        "default": "library",
        "match_properties": ["text", "name", "actionCommand"],
    }, indent=2) + "\n")
    (out / "project.json").write_text(json.dumps({
        "version_label": f"mindmap-1.{version - 1}",
        "gui_model": "gui.json",
        "call_graph": "callgraph.json",
        "source_root": "src",
        "rules": "rules.json",
    }, indent=2) + "\n")


if __name__ == "__main__":
    build(1)
    build(2)
