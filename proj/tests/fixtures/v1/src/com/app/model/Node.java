package com.app.model;

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
