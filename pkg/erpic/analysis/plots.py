"""
Plotly figure builders for snapshots, velocity profiles, energy and convergence
"""

import numpy as np
import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots

try:
    # When used as a package
    from ..mesh import ScalarField
    from .diagnostics import VelocityMarginal
except ImportError:
    # When used as standalone
    from erpic.mesh import ScalarField
    from erpic.analysis.diagnostics import VelocityMarginal


def _frame_axes(fig, rows=1):
    for i in range(1, rows + 1):
        fig.update_xaxes(mirror=True, ticks='outside', showline=True, linecolor='black',
                         gridcolor='lightgrey', row=i, col=1)
        fig.update_yaxes(mirror=True, ticks='outside', showline=True, linecolor='black',
                         gridcolor='lightgrey', row=i, col=1)


def show_field(field: ScalarField, plot_title='', plot_height=600, colorscale='Viridis'):
    """
    Heatmap of a node-sampled field

    Parameters:
    - field: ScalarField
    - plot_title: str, title of the plot
    - plot_height: int, default 600, height of the plot
    - colorscale: str, plotly colorscale name
    """
    grid = field.grid
    X, Y = grid.nodes()
    fig = go.Figure(go.Heatmap(x=X[:, 0], y=Y[0, :], z=field.values.T, colorscale=colorscale))
    fig.update_layout(plot_bgcolor='white', height=plot_height, title=plot_title,
                      xaxis_title='x1', yaxis_title='x2')
    fig.update_yaxes(scaleanchor='x', scaleratio=1)
    return fig


def show_velocity_marginal(marginal: VelocityMarginal, plot_title='', plot_height=600):
    """
    Contour plot of the velocity profile chi(v)

    Parameters:
    - marginal: VelocityMarginal
    - plot_title: str, title of the plot
    - plot_height: int, default 600, height of the plot
    """
    v = marginal.nodes()
    fig = go.Figure(go.Contour(x=v, y=v, z=marginal.values.T, colorscale='Jet', ncontours=30))
    title = plot_title or f'Velocity profile at time {marginal.time:g}'
    if marginal.escaped:
        title = f'{title} ({marginal.escaped} particles outside the box)'
    fig.update_layout(plot_bgcolor='white', height=plot_height, title=title,
                      xaxis_title='v1', yaxis_title='v2')
    return fig


def show_energy_error(energy: pd.DataFrame, plot_title='', plot_height=500):
    """
    Relative energy error of one or more runs against time

    Parameters:
    - energy: DataFrame with columns time and relH_err, or a dict label -> DataFrame
    - plot_title: str, title of the plot
    - plot_height: int, default 500, height of the plot
    """
    series = energy if isinstance(energy, dict) else {'relH_err': energy}
    fig = make_subplots(rows=1, cols=1)
    for label, edf in series.items():
        fig.add_trace(go.Scatter(x=edf['time'], y=edf['relH_err'], line=dict(width=2), name=label),
                      row=1, col=1)
    fig.update_layout(showlegend=len(series) > 1, plot_bgcolor='white', height=plot_height, title=plot_title,
                      xaxis_title='time', yaxis_title='|H - H0| / H0')
    fig.update_yaxes(type='log', exponentformat='e')
    _frame_axes(fig)
    return fig


def show_convergence(errors: pd.DataFrame, plot_title='', plot_height=600):
    """
    Error err_rho + err_rho_v against dt, one line per eps, with reference slopes 1 and 2

    Parameters:
    - errors: DataFrame with the errors.csv columns (eps, dt, err_rho_rhov, order)
    - plot_title: str, title of the plot
    - plot_height: int, default 600, height of the plot
    """
    fig = make_subplots(rows=1, cols=1)
    for eps, cell in errors.groupby('eps', sort=False):
        cell = cell.sort_values('dt')
        fig.add_trace(go.Scatter(x=cell['dt'], y=cell['err_rho_rhov'], mode='lines+markers',
                                 name=f'eps = {eps:g}'), row=1, col=1)

    if not errors.empty:
        dt = np.sort(errors['dt'].unique())
        anchor = float(errors['err_rho_rhov'].median())
        for order, dash in ((1, 'dash'), (2, 'dot')):
            ref = anchor * (dt / dt[-1]) ** order
            fig.add_trace(go.Scatter(x=dt, y=ref, line=dict(color='black', width=1, dash=dash),
                                     name=f'order {order}'), row=1, col=1)

    fig.update_layout(plot_bgcolor='white', height=plot_height, title=plot_title,
                      xaxis_title='dt', yaxis_title='err_rho + err_rho_v')
    fig.update_xaxes(type='log')
    fig.update_yaxes(type='log', exponentformat='e')
    _frame_axes(fig)
    return fig
