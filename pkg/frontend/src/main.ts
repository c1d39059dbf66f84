import { UiSession } from "./session.js";
import { connect } from "./transport.js";
import { mount } from "./ui.js";

const session = new UiSession();
const scheme = location.protocol === "https:" ? "wss" : "ws";
session.attach(connect(`${scheme}://${location.host}/ws`, session));
mount(document.getElementById("app") as HTMLElement, session);
