import { ApiClient } from "./api.js";
import { mount } from "./dom.js";
import { Store } from "./store.js";

const api = new ApiClient((url, init) => fetch(url, init), "/api");
const store = new Store(api);
mount(store);
void store.init();
